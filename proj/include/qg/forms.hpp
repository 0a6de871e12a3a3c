#pragma once

#include <functional>
#include <map>
#include <vector>

#include "qg/hopf.hpp"
#include "qg/ncalg.hpp"

namespace qg {

/// Degree-truncated k-linear form on an algebra, stored extensionally on the
/// degree-<=D monomial basis.  Derived forms (toral data, twist evaluations,
/// pairing slices) carry their constructive evaluator and remain evaluable on
/// the larger monomials that appear inside coproduct legs; table-only forms
/// raise DegreeOverflow outside the table domain -- never a silent zero.
class MultiForm {
 public:
  MultiForm() = default;
  MultiForm(const Presentation* domain, int arity, int degree);

  static MultiForm counit_unit(const Presentation* domain, int arity);

  const Presentation* domain() const { return dom_; }
  int arity() const { return k_; }
  int degree() const { return deg_; }
  bool unital() const;  // value 1 on the all-units tuple

  void set(const std::vector<Monomial>& tuple, const Series& v);
  void set_evaluator(std::function<Series(const std::vector<Monomial>&)> f) {
    eval_ = std::move(f);
  }
  bool has_evaluator() const { return static_cast<bool>(eval_); }

  Series eval_tuple(const std::vector<Monomial>& tuple) const;
  Series eval(const std::vector<AlgElem>& args) const;
  Series eval2(const AlgElem& a, const AlgElem& b) const;
  Series eval1(const AlgElem& a) const;

  MultiForm operator-() const;
  MultiForm scaled(const Series& c) const;
  MultiForm shifted(int exp) const;
  friend MultiForm operator+(const MultiForm& a, const MultiForm& b);
  friend MultiForm operator-(const MultiForm& a, const MultiForm& b);
  /// Transpose the slots of an arity-2 form.
  MultiForm transposed() const;

  /// Extensional table on tuples with every slot of degree <= bound.
  std::map<std::vector<Monomial>, Series> materialize(int bound) const;
  bool equal_on_domain(const MultiForm& o, int order) const;

 private:
  const Presentation* dom_ = nullptr;
  int k_ = 2;
  int deg_ = 4;
  std::function<Series(const std::vector<Monomial>&)> eval_;
  mutable std::map<std::vector<Monomial>, Series> table_;
};

/// All normal monomials of degree <= maxdeg, in term order.
std::vector<Monomial> basis_monomials(const Presentation& p, int maxdeg);

/// Convolution product (f*g)(a,b,...) = sum f(a1,b1,..) g(a2,b2,..).
MultiForm conv_mul(const MultiForm& f, const MultiForm& g);

enum class ConvKind { Exp, Log };

/// Convolution exponential of a unit-killing payload (with its h-scaling
/// already applied; Laurent values allowed), or convolution logarithm of a
/// unital form.  Convergence at truncation is certified via the reduced
/// coproduct chains; failure raises PolarDivergence.
MultiForm conv_exp_log(ConvKind kind, const MultiForm& f);

MultiForm conv_inverse(const MultiForm& f);

// ---------------------------------------------------------------- pairing --

/// Hopf pairing between a QFSHA and a QUEA, given by block path matrices:
/// each f-generator sits at a position of a block matrix, each quea generator
/// acts on every block, and single-generator values extend along coproduct
/// paths.  PBW-split blocks (quantum doubles) are zero outside their Borel.
///
/// The k-fold extension folds the iterated-coproduct action directly in the
/// representation: the group-like dressings of the quea generators
/// (Δ(g) = g⊗R_g + L_g⊗g) become diagonal exponential matrices, recorded as
/// the weight vectors lamL/lamR.
struct PairingSpec {
  const Presentation* fh = nullptr;
  const Presentation* uh = nullptr;
  struct Position {
    int block = 0, i = 0, j = 0;
  };
  std::vector<Position> fpos;                         // per f-generator
  std::vector<std::vector<std::vector<std::vector<Rat>>>> rho;  // [block][ugen][i][j]
  std::vector<std::vector<std::vector<Rat>>> lamL, lamR;        // [block][ugen][i]
  int dim(int block) const { return static_cast<int>(rho[block][0].size()); }
};

/// <t_g, u-monomial> via the block path matrices.
Series pairing_gen(const PairingSpec& pr, int fgen, const Monomial& u);

/// <t_{g_1}...t_{g_k}, u-monomial> via the representation fold.
Series pairing_mono(const PairingSpec& pr, const Monomial& f, const Monomial& u);

/// Bilinear extension <f, u> with <ab, z> = <a⊗b, Δz>.
Series pairing_eval(const PairingSpec& pr, const AlgElem& f, const AlgElem& u);

/// <f1⊗f2, T> for T in the quea tensor square.
Series pairing_eval2(const PairingSpec& pr, const AlgElem& f1, const AlgElem& f2,
                     const TensorElem& T);

/// Well-definedness: every rewrite rule of either side is respected by the
/// pairing against monomials of degree <= bound on the other side.
Certificate pairing_certificate(const PairingSpec& pr, int bound);

/// sigma_F(phi, psi) = <phi ⊗ psi, F>: the 2-form induced on the dual qfsha
/// by a twist of the quea.
MultiForm cocycle_from_twist(const TensorElem& F, const PairingSpec& pr);

}  // namespace qg
