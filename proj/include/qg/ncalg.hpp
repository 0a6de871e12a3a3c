#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "qg/certificate.hpp"
#include "qg/series.hpp"

namespace qg {

enum class Sort { Cartan, Raising, Lowering, MatrixEntry };
enum class Kind { Quea, Qfsha };

struct GeneratorSpec {
  std::string name;
  Sort sort = Sort::Cartan;
  int a = 0, b = 0;  // row/column or root index
};

/// A word in generator ids; the commuting cartan block of a normal word is
/// kept sorted, so consecutive equal letters encode the multi-exponent.
struct Monomial {
  std::vector<uint16_t> w;

  Monomial() = default;
  explicit Monomial(std::vector<uint16_t> ww) : w(std::move(ww)) {}
  static Monomial unit() { return Monomial(); }
  static Monomial gen(uint16_t g) { return Monomial({g}); }

  int degree() const { return static_cast<int>(w.size()); }
  bool is_unit() const { return w.empty(); }
  auto operator<=>(const Monomial&) const = default;
};

class Presentation;

/// Normal-ordered noncommutative polynomial with Series coefficients.
class AlgElem {
 public:
  AlgElem() = default;
  explicit AlgElem(const Presentation* p) : p_(p) {}

  static AlgElem unit(const Presentation* p);
  static AlgElem gen(const Presentation* p, int g);
  static AlgElem scalar(const Presentation* p, const Series& c);

  const Presentation* pres() const { return p_; }
  const std::map<Monomial, Series>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }
  int degree() const;  // max word length, 0 for scalars

  void add_term(const Monomial& m, const Series& c);

  AlgElem operator-() const;
  AlgElem& operator+=(const AlgElem& o);
  AlgElem& operator-=(const AlgElem& o);
  friend AlgElem operator+(AlgElem a, const AlgElem& b) { return a += b; }
  friend AlgElem operator-(AlgElem a, const AlgElem& b) { return a -= b; }
  AlgElem scaled(const Series& c) const;
  AlgElem shifted(int exp) const;  // multiply by h^exp
  AlgElem capped(int order) const;

  bool equal_upto(const AlgElem& o, int order) const;
  std::string str() const;

  /// Same data attached to a structurally identical presentation.
  AlgElem rebound(const Presentation* p) const;

 private:
  const Presentation* p_ = nullptr;
  std::map<Monomial, Series> t_;
  friend class Presentation;
};

/// Element of the k-fold tensor power, componentwise normal-ordered.
class TensorElem {
 public:
  TensorElem() = default;
  TensorElem(const Presentation* p, int arity) : p_(p), k_(arity) {}

  static TensorElem unit(const Presentation* p, int arity);
  static TensorElem outer(const std::vector<AlgElem>& slots);

  const Presentation* pres() const { return p_; }
  int arity() const { return k_; }
  const std::map<std::vector<Monomial>, Series>& terms() const { return t_; }
  bool is_zero() const { return t_.empty(); }

  void add_term(const std::vector<Monomial>& m, const Series& c);

  TensorElem operator-() const;
  TensorElem& operator+=(const TensorElem& o);
  TensorElem& operator-=(const TensorElem& o);
  friend TensorElem operator+(TensorElem a, const TensorElem& b) { return a += b; }
  friend TensorElem operator-(TensorElem a, const TensorElem& b) { return a -= b; }
  TensorElem scaled(const Series& c) const;
  TensorElem shifted(int exp) const;
  TensorElem capped(int order) const;

  /// Permute slots: result slot i is input slot perm[i].
  TensorElem permuted(const std::vector<int>& perm) const;
  AlgElem slot0() const;  // arity-1 view back to AlgElem

  bool equal_upto(const TensorElem& o, int order) const;
  std::string str() const;

  TensorElem rebound(const Presentation* p) const;

 private:
  const Presentation* p_ = nullptr;
  int k_ = 1;
  std::map<std::vector<Monomial>, Series> t_;
};

struct RewriteRule {
  std::vector<uint16_t> lhs;  // reducible pattern, matched as a subword
  AlgElem rhs;
};

struct HopfTables {
  std::vector<TensorElem> coproduct;  // arity 2, per generator
  std::vector<Series> counit;
  std::vector<AlgElem> antipode;
  bool empty() const { return coproduct.empty(); }
};

/// Toral data of a preset: T_i^± attached to the i-th simple root, as
/// cartan-generator combinations, plus the cartan weights of every generator.
struct RootDatum {
  int e_gen = -1, f_gen = -1;
  std::map<int, Rat> t_plus, t_minus;
};

class Presentation {
 public:
  std::string name;
  Kind kind = Kind::Quea;
  Window window;
  int degree = 1 << 20;  // D, the public qfsha/form degree cutoff
  std::vector<GeneratorSpec> gens;
  std::vector<RewriteRule> rules;
  HopfTables hopf;
  std::vector<RootDatum> roots;
  bool experimental = false;
  size_t step_budget = 8'000'000;

  int gen_id(const std::string& n) const;
  std::vector<int> cartans() const;
  /// Internal word cutoff: dropped words only touch components with
  /// degree + valuation beyond every claim (see normal_form).
  int word_cut() const;

  /// Reduce a raw word (times a coefficient) to its unique normal form.
  /// Memoized per word; the cache is invisible to callers and not
  /// thread-safe (the engine is single-threaded).
  AlgElem normal_form(const std::vector<uint16_t>& word, const Series& coeff) const;
  AlgElem mul(const AlgElem& a, const AlgElem& b) const;
  TensorElem mul(const TensorElem& a, const TensorElem& b) const;

  AlgElem parse(const std::string& text) const;  // element literal

  /// Local confluence on all critical pairs of the rule set, up to truncation.
  Certificate confluence_certificate() const;

 private:
  const AlgElem& nf_word(const std::vector<uint16_t>& word) const;
  mutable std::map<std::vector<uint16_t>, AlgElem> nf_cache_;
  mutable size_t nf_steps_ = 0;
};

using PresPtr = std::shared_ptr<const Presentation>;

AlgElem elem_mul(const AlgElem& a, const AlgElem& b);
TensorElem tensor_mul(const TensorElem& a, const TensorElem& b);
AlgElem elem_pow(const AlgElem& a, int n);

/// exp of an element whose powers die inside the truncation window
/// (valuation growth or qfsha degree growth).  Errors with the given code if
/// the iteration bound is hit with a nonzero term.
AlgElem elem_exp(const AlgElem& a);
AlgElem elem_log(const AlgElem& a);  // a == 1 + (window-nilpotent)
TensorElem tensor_exp(const TensorElem& a);
TensorElem tensor_log(const TensorElem& a);

/// Multiplicative (or anti-multiplicative) extension of generator images.
struct GenMorphism {
  const Presentation* src = nullptr;
  const Presentation* dst = nullptr;
  int arity = 1;
  std::vector<TensorElem> images;  // per source generator
  bool anti = false;
  std::string label;

  TensorElem apply(const AlgElem& x) const;
  AlgElem apply1(const AlgElem& x) const;  // arity-1 convenience
  /// Images respect every rewrite rule of src (checked once, cached by caller).
  Certificate respects_rules() const;
};

Series counit_eval(const Presentation& p, const AlgElem& x);

}  // namespace qg
