#include "qg/hopf.hpp"

#include <random>

#include "qg/errors.hpp"

namespace qg {

GenMorphism coproduct_morphism(const Presentation& p) {
  GenMorphism m;
  m.src = m.dst = &p;
  m.arity = 2;
  m.images = p.hopf.coproduct;
  m.label = "coproduct";
  return m;
}

GenMorphism antipode_morphism(const Presentation& p) {
  GenMorphism m;
  m.src = m.dst = &p;
  m.arity = 1;
  m.anti = true;
  m.label = "antipode";
  for (const auto& img : p.hopf.antipode) m.images.push_back(TensorElem::outer({img}));
  return m;
}

TensorElem coproduct(const Presentation& p, const AlgElem& x) {
  return coproduct_morphism(p).apply(x);
}

AlgElem antipode(const Presentation& p, const AlgElem& x) {
  return antipode_morphism(p).apply1(x);
}

TensorElem coproduct_slot(const Presentation& p, const TensorElem& t, int slot) {
  TensorElem out(&p, t.arity() + 1);
  for (const auto& [m, c] : t.terms()) {
    AlgElem one(&p);
    one.add_term(m[slot], Series::one());
    TensorElem d = coproduct(p, one);
    for (const auto& [dm, dc] : d.terms()) {
      std::vector<Monomial> tuple;
      tuple.reserve(t.arity() + 1);
      for (int i = 0; i < slot; ++i) tuple.push_back(m[i]);
      tuple.push_back(dm[0]);
      tuple.push_back(dm[1]);
      for (int i = slot + 1; i < t.arity(); ++i) tuple.push_back(m[i]);
      out.add_term(tuple, (c * dc).restricted(p.window));
    }
  }
  return out;
}

TensorElem iterated_coproduct(const Presentation& p, const AlgElem& x, int slots) {
  TensorElem t = TensorElem::outer({x});
  for (int k = 1; k < slots; ++k) t = coproduct_slot(p, t, 0);
  return t;
}

static Series monomial_counit(const Presentation& p, const Monomial& m) {
  Series v = Series::one();
  for (uint16_t g : m.w) {
    v = (v * p.hopf.counit[g]).restricted(p.window);
    if (v.is_zero()) break;
  }
  return v;
}

TensorElem reduce_slot(const Presentation& p, const TensorElem& t, int slot) {
  TensorElem out(&p, t.arity());
  for (const auto& [m, c] : t.terms()) {
    out.add_term(m, c);
    Series e = monomial_counit(p, m[slot]);
    if (!e.is_zero()) {
      auto tuple = m;
      tuple[slot] = Monomial::unit();
      out.add_term(tuple, -(c * e).restricted(p.window));
    }
  }
  return out;
}

TensorElem counit_slot(const Presentation& p, const TensorElem& t, int slot) {
  TensorElem out(&p, t.arity() - 1);
  for (const auto& [m, c] : t.terms()) {
    Series e = monomial_counit(p, m[slot]);
    if (e.is_zero()) continue;
    std::vector<Monomial> tuple;
    for (int i = 0; i < t.arity(); ++i)
      if (i != slot) tuple.push_back(m[i]);
    out.add_term(tuple, (c * e).restricted(p.window));
  }
  return out;
}

TensorElem morph_slot(const Presentation& p, const TensorElem& t, int slot,
                      const GenMorphism& f) {
  TensorElem out(&p, t.arity());
  for (const auto& [m, c] : t.terms()) {
    AlgElem one(&p);
    one.add_term(m[slot], Series::one());
    AlgElem y = f.apply1(one);
    for (const auto& [ym, yc] : y.terms()) {
      auto tuple = m;
      tuple[slot] = ym;
      out.add_term(tuple, (c * yc).restricted(p.window));
    }
  }
  return out;
}

AlgElem multiply_slots(const Presentation& p, const TensorElem& t) {
  AlgElem out(&p);
  for (const auto& [m, c] : t.terms()) {
    std::vector<uint16_t> w;
    for (const auto& mm : m) w.insert(w.end(), mm.w.begin(), mm.w.end());
    out += p.normal_form(w, c);
  }
  return out;
}

TensorElem delta_n(const Presentation& p, int n, const AlgElem& x) {
  if (n < 1) throw ArityMismatch("delta_n needs n >= 1");
  // delta_{m+1} = (pi ⊗ pi ⊗ id…) ∘ Δ_slot0 ∘ delta_m, since pi(1) = 0.
  TensorElem t = reduce_slot(p, TensorElem::outer({x}), 0);
  for (int m = 2; m <= n; ++m) {
    t = coproduct_slot(p, t, 0);
    t = reduce_slot(p, t, 0);
    t = reduce_slot(p, t, 1);
  }
  return t;
}

std::optional<int> tensor_valuation(const TensorElem& t) {
  std::optional<int> v;
  for (const auto& [m, c] : t.terms()) {
    auto cv = c.valuation();
    if (cv && (!v || *cv < *v)) v = cv;
  }
  return v;
}

std::optional<int> elem_valuation(const AlgElem& x) {
  std::optional<int> v;
  for (const auto& [m, c] : x.terms()) {
    auto cv = c.valuation();
    if (cv && (!v || *cv < *v)) v = cv;
  }
  return v;
}

std::pair<AlgElem, TensorElem> plus_and_nabla(const Presentation& p, const AlgElem& x) {
  AlgElem plus = x - AlgElem::scalar(&p, counit_eval(p, x));
  TensorElem d = coproduct(p, x);
  TensorElem nabla = d - d.permuted({1, 0});
  return {plus, nabla};
}

std::vector<AlgElem> random_corpus(const Presentation& p, uint64_t seed, int count,
                                   int max_len) {
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::vector<AlgElem> out;
  int ng = static_cast<int>(p.gens.size());
  for (int i = 0; i < count; ++i) {
    int len = 1 + static_cast<int>(rng() % static_cast<uint64_t>(max_len));
    std::vector<uint16_t> w;
    for (int j = 0; j < len; ++j) w.push_back(static_cast<uint16_t>(rng() % ng));
    AlgElem e = p.normal_form(w, Series::one());
    if ((rng() & 1) != 0) e += AlgElem::unit(&p).scaled(Series(Rat(1, 2)));
    out.push_back(e);
  }
  return out;
}

Certificate check_hopf_axioms(const Presentation& p, uint64_t seed) {
  Certificate cert;
  cert.claim = "Hopf axiom suite for '" + p.name + "'";
  cert.tag = "hopf.axioms";
  cert.order = p.window.order;
  cert.degree = p.degree;
  if (p.hopf.empty()) {
    cert.fail("no Hopf tables");
    return cert;
  }
  const int N = p.window.order;

  GenMorphism dm = coproduct_morphism(p);
  GenMorphism sm = antipode_morphism(p);

  // structure maps must be well defined on the presented algebra
  cert.merge(dm.respects_rules());
  cert.merge(sm.respects_rules());
  if (!cert.pass) return cert;
  for (size_t i = 0; i < p.rules.size(); ++i) {
    AlgElem lhs(&p);
    lhs.add_term(Monomial(p.rules[i].lhs), Series::one());
    if (!counit_eval(p, lhs).equal_upto(counit_eval(p, p.rules[i].rhs), N)) {
      cert.fail("counit breaks rule " + std::to_string(i));
      return cert;
    }
  }

  std::vector<AlgElem> xs;
  for (size_t g = 0; g < p.gens.size(); ++g) xs.push_back(AlgElem::gen(&p, g));
  int max_len = std::min(p.degree, 3);
  for (auto& e : random_corpus(p, seed, 8, max_len)) xs.push_back(e);

  for (size_t i = 0; i < xs.size(); ++i) {
    const AlgElem& x = xs[i];
    std::string who =
        i < p.gens.size() ? p.gens[i].name : "corpus elem " + std::to_string(i);
    TensorElem d = coproduct(p, x);
    if (!coproduct_slot(p, d, 0).equal_upto(coproduct_slot(p, d, 1), N)) {
      cert.fail("coassociativity on " + who);
      return cert;
    }
    if (!counit_slot(p, d, 0).slot0().equal_upto(x, N) ||
        !counit_slot(p, d, 1).slot0().equal_upto(x, N)) {
      cert.fail("counit law on " + who);
      return cert;
    }
    AlgElem ioe = AlgElem::scalar(&p, counit_eval(p, x));
    if (!multiply_slots(p, morph_slot(p, d, 0, sm)).equal_upto(ioe, N) ||
        !multiply_slots(p, morph_slot(p, d, 1, sm)).equal_upto(ioe, N)) {
      cert.fail("antipode law on " + who);
      return cert;
    }
  }

  // Δ is an algebra morphism (belt and braces beyond the rule certificates)
  std::mt19937_64 rng(seed + 1);
  for (int k = 0; k < 6; ++k) {
    const AlgElem& a = xs[rng() % xs.size()];
    const AlgElem& b = xs[rng() % xs.size()];
    if (!coproduct(p, p.mul(a, b))
             .equal_upto(p.mul(coproduct(p, a), coproduct(p, b)), N)) {
      cert.fail("Δ multiplicativity on corpus pair " + std::to_string(k));
      return cert;
    }
  }
  return cert;
}

}  // namespace qg
