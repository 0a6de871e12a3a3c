#include "qg/forms.hpp"

#include <algorithm>

#include "qg/errors.hpp"

namespace qg {

MultiForm::MultiForm(const Presentation* domain, int arity, int degree)
    : dom_(domain), k_(arity), deg_(degree) {}

MultiForm MultiForm::counit_unit(const Presentation* domain, int arity) {
  MultiForm f(domain, arity, domain->degree);
  f.set_evaluator([domain](const std::vector<Monomial>& tuple) {
    Series v = Series::one();
    for (const auto& m : tuple) {
      AlgElem e(domain);
      e.add_term(m, Series::one());
      v = (v * counit_eval(*domain, e)).restricted(domain->window);
      if (v.is_zero()) break;
    }
    return v;
  });
  return f;
}

bool MultiForm::unital() const {
  return eval_tuple(std::vector<Monomial>(k_)).equal_upto(Series::one(),
                                                          dom_->window.order);
}

void MultiForm::set(const std::vector<Monomial>& tuple, const Series& v) {
  table_[tuple] = v;
}

Series MultiForm::eval_tuple(const std::vector<Monomial>& tuple) const {
  if (static_cast<int>(tuple.size()) != k_) throw ArityMismatch("form arity mismatch");
  auto it = table_.find(tuple);
  if (it != table_.end()) return it->second;
  for (const auto& m : tuple)
    if (m.degree() > deg_ && !eval_) {
      AlgElem e(dom_);
      e.add_term(m, Series::one());
      throw DegreeOverflow("form is undefined beyond degree " + std::to_string(deg_) +
                           " (asked at " + e.str() + ")");
    }
  if (!eval_) return Series();  // inside the declared domain, table default 0
  Series v = eval_(tuple);
  table_[tuple] = v;
  return v;
}

Series MultiForm::eval(const std::vector<AlgElem>& args) const {
  if (static_cast<int>(args.size()) != k_) throw ArityMismatch("form arity mismatch");
  // multilinear extension
  std::vector<std::pair<std::vector<Monomial>, Series>> acc;
  acc.push_back({{}, Series::one()});
  for (const auto& a : args) {
    if (a.pres() != dom_) throw DomainMismatch("form argument from another presentation");
    std::vector<std::pair<std::vector<Monomial>, Series>> next;
    for (const auto& [tuple, c] : acc)
      for (const auto& [m, d] : a.terms()) {
        auto t2 = tuple;
        t2.push_back(m);
        next.push_back({std::move(t2), c * d});
      }
    acc = std::move(next);
  }
  Series out;
  for (const auto& [tuple, c] : acc) out += c * eval_tuple(tuple);
  return out.capped(dom_->window.order);
}

Series MultiForm::eval2(const AlgElem& a, const AlgElem& b) const { return eval({a, b}); }
Series MultiForm::eval1(const AlgElem& a) const { return eval({a}); }

MultiForm MultiForm::operator-() const { return scaled(Series(Rat(-1))); }

MultiForm MultiForm::scaled(const Series& c) const {
  MultiForm r(dom_, k_, deg_);
  auto keep = std::make_shared<const MultiForm>(*this);
  r.set_evaluator([keep, c](const std::vector<Monomial>& t) {
    return (keep->eval_tuple(t) * c).capped(keep->domain()->window.order);
  });
  return r;
}

MultiForm MultiForm::shifted(int exp) const {
  MultiForm r(dom_, k_, deg_);
  auto keep = std::make_shared<const MultiForm>(*this);
  r.set_evaluator([keep, exp](const std::vector<Monomial>& t) {
    return keep->eval_tuple(t).shifted(exp);
  });
  return r;
}

MultiForm operator+(const MultiForm& a, const MultiForm& b) {
  if (a.dom_ != b.dom_ || a.k_ != b.k_) throw DomainMismatch("form sum domains differ");
  MultiForm r(a.dom_, a.k_, std::min(a.deg_, b.deg_));
  auto ka = std::make_shared<const MultiForm>(a);
  auto kb = std::make_shared<const MultiForm>(b);
  r.set_evaluator([ka, kb](const std::vector<Monomial>& t) {
    return ka->eval_tuple(t) + kb->eval_tuple(t);
  });
  return r;
}

MultiForm operator-(const MultiForm& a, const MultiForm& b) { return a + (-b); }

MultiForm MultiForm::transposed() const {
  if (k_ != 2) throw ArityMismatch("transpose needs arity 2");
  MultiForm r(dom_, 2, deg_);
  auto keep = std::make_shared<const MultiForm>(*this);
  r.set_evaluator([keep](const std::vector<Monomial>& t) {
    return keep->eval_tuple({t[1], t[0]});
  });
  return r;
}

std::map<std::vector<Monomial>, Series> MultiForm::materialize(int bound) const {
  std::map<std::vector<Monomial>, Series> out;
  auto basis = basis_monomials(*dom_, bound);
  std::vector<size_t> idx(k_, 0);
  while (true) {
    std::vector<Monomial> tuple;
    for (int i = 0; i < k_; ++i) tuple.push_back(basis[idx[i]]);
    Series v = eval_tuple(tuple);
    if (!v.is_zero()) out[tuple] = v;
    int i = k_ - 1;
    while (i >= 0 && ++idx[i] == basis.size()) idx[i--] = 0;
    if (i < 0) break;
  }
  return out;
}

bool MultiForm::equal_on_domain(const MultiForm& o, int order) const {
  if (dom_ != o.dom_ || k_ != o.k_) return false;
  auto basis = basis_monomials(*dom_, std::min(deg_, o.deg_));
  std::vector<size_t> idx(k_, 0);
  while (true) {
    std::vector<Monomial> tuple;
    for (int i = 0; i < k_; ++i) tuple.push_back(basis[idx[i]]);
    if (!eval_tuple(tuple).equal_upto(o.eval_tuple(tuple), order)) return false;
    int i = k_ - 1;
    while (i >= 0 && ++idx[i] == basis.size()) idx[i--] = 0;
    if (i < 0) break;
  }
  return true;
}

std::vector<Monomial> basis_monomials(const Presentation& p, int maxdeg) {
  std::vector<Monomial> out;
  std::vector<uint16_t> w;
  size_t maxlhs = 1;
  for (const auto& r : p.rules) maxlhs = std::max(maxlhs, r.lhs.size());

  auto reducible_at_end = [&](const std::vector<uint16_t>& word) {
    for (const auto& r : p.rules) {
      if (r.lhs.size() > word.size()) continue;
      if (std::equal(r.lhs.begin(), r.lhs.end(), word.end() - r.lhs.size())) return true;
    }
    return false;
  };

  std::function<void()> rec = [&]() {
    out.push_back(Monomial(w));
    if (static_cast<int>(w.size()) >= maxdeg) return;
    for (uint16_t g = 0; g < p.gens.size(); ++g) {
      w.push_back(g);
      if (!reducible_at_end(w)) rec();
      w.pop_back();
    }
  };
  rec();
  std::sort(out.begin(), out.end());
  return out;
}

// ------------------------------------------------------------ convolution --

MultiForm conv_mul(const MultiForm& f, const MultiForm& g) {
  if (f.domain() != g.domain() || f.arity() != g.arity())
    throw DomainMismatch("convolution factors live on different domains");
  const Presentation* p = f.domain();
  int k = f.arity();
  MultiForm r(p, k, std::min(f.degree(), g.degree()));
  auto kf = std::make_shared<const MultiForm>(f);
  auto kg = std::make_shared<const MultiForm>(g);
  r.set_evaluator([p, k, kf, kg](const std::vector<Monomial>& tuple) {
    // cross-expand Δ of every slot
    std::vector<std::pair<std::pair<std::vector<Monomial>, std::vector<Monomial>>, Series>>
        acc;
    acc.push_back({{{}, {}}, Series::one()});
    for (int i = 0; i < k; ++i) {
      AlgElem e(p);
      e.add_term(tuple[i], Series::one());
      TensorElem d = coproduct(*p, e);
      decltype(acc) next;
      for (const auto& [pairs, c] : acc)
        for (const auto& [dm, dc] : d.terms()) {
          auto p2 = pairs;
          p2.first.push_back(dm[0]);
          p2.second.push_back(dm[1]);
          next.push_back({std::move(p2), (c * dc).capped(p->window.order)});
        }
      acc = std::move(next);
    }
    Series out;
    for (const auto& [pairs, c] : acc) {
      Series a = kf->eval_tuple(pairs.first);
      if (a.is_zero()) continue;
      Series b = kg->eval_tuple(pairs.second);
      out += c * a * b;
    }
    return out.capped(p->window.order);
  });
  return r;
}

namespace {

/// One step of the reduced-coproduct chain, kept as raw tensors.
TensorElem delta_chain_step(const Presentation& p, const TensorElem& t) {
  TensorElem u = coproduct_slot(p, t, 0);
  u = reduce_slot(p, u, 0);
  return reduce_slot(p, u, 1);
}

/// f^{⊗m} contracted against reduced coproduct legs of each argument.
Series contract(const MultiForm& f, const std::vector<TensorElem>& legs) {
  // legs[j] = delta_m of argument j, all with the same arity m
  int m = legs[0].arity();
  int k = static_cast<int>(legs.size());
  Series out;
  std::vector<std::pair<std::vector<const std::vector<Monomial>*>, Series>> acc;
  acc.push_back({{}, Series::one()});
  for (int j = 0; j < k; ++j) {
    decltype(acc) next;
    for (const auto& [rows, c] : acc)
      for (const auto& [mm, cc] : legs[j].terms()) {
        auto r2 = rows;
        r2.push_back(&mm);
        next.push_back({std::move(r2), c * cc});
      }
    acc = std::move(next);
  }
  for (const auto& [rows, c] : acc) {
    Series v = c;
    for (int i = 0; i < m && !v.is_zero(); ++i) {
      std::vector<Monomial> tuple;
      for (int j = 0; j < k; ++j) tuple.push_back((*rows[j])[i]);
      v = v * f.eval_tuple(tuple);
    }
    out += v;
  }
  return out;
}

// f(z,1,...) = 0 = f(...,1,z): checked on the basis with all other slots unit.
bool unit_killing(const MultiForm& f) {
  auto basis = basis_monomials(*f.domain(), f.domain()->degree);
  for (int slot = 0; slot < f.arity(); ++slot)
    for (const auto& m : basis) {
      std::vector<Monomial> tuple(f.arity());
      tuple[slot] = m;
      if (!f.eval_tuple(tuple).is_zero()) return false;
    }
  return true;
}

}  // namespace

MultiForm conv_exp_log(ConvKind kind, const MultiForm& f) {
  const Presentation* p = f.domain();
  const int k = f.arity();
  auto payload = std::make_shared<const MultiForm>(
      kind == ConvKind::Exp ? f : f - MultiForm::counit_unit(p, k));
  if (kind == ConvKind::Exp && !unit_killing(f))
    throw PolarDivergence("conv exp payload must vanish when any slot is a unit");
  if (kind == ConvKind::Log && !f.unital())
    throw PolarDivergence("conv log needs a unital form");

  MultiForm r(p, k, f.degree());
  bool is_exp = (kind == ConvKind::Exp);
  r.set_evaluator([p, k, payload, is_exp](const std::vector<Monomial>& tuple) {
    // m = 0 term of the exponential
    Series out;
    if (is_exp) {
      Series e0 = Series::one();
      for (const auto& m : tuple) {
        AlgElem el(p);
        el.add_term(m, Series::one());
        e0 = e0 * counit_eval(*p, el);
      }
      out = e0;
    }
    std::vector<TensorElem> legs;
    for (const auto& m : tuple) {
      AlgElem el(p);
      el.add_term(m, Series::one());
      legs.push_back(reduce_slot(*p, TensorElem::outer({el}), 0));
    }
    const int bound = 2 * p->window.order + 2 * p->window.floor +
                      2 * std::min(p->degree, 1 << 10) + 4;
    Rat mfact(1);
    for (int m = 1; m <= bound; ++m) {
      bool dead = true;
      for (const auto& l : legs)
        if (!l.is_zero()) dead = false;
      if (dead) return out;
      mfact *= m;
      Series term = contract(*payload, legs);
      if (!term.is_zero()) {
        Series c = is_exp ? Series(Rat(1) / mfact) : Series(Rat((m % 2) ? 1 : -1, m));
        out += term * c;
      }
      for (auto& l : legs) l = delta_chain_step(*p, l);
    }
    throw PolarDivergence("convolution series did not terminate inside the window");
  });
  return r;
}

MultiForm conv_inverse(const MultiForm& f) {
  // exp_* of the negated log; uniform with polar data where the antipode
  // route is unavailable.
  return conv_exp_log(ConvKind::Exp, -conv_exp_log(ConvKind::Log, f));
}

// ---------------------------------------------------------------- pairing --

Series pairing_gen(const PairingSpec& pr, int fgen, const Monomial& u) {
  const auto& pos = pr.fpos[fgen];
  int n = pr.dim(pos.block);
  std::vector<std::vector<Rat>> M(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i) M[i][i] = 1;
  for (uint16_t g : u.w) {
    const auto& R = pr.rho[pos.block][g];
    std::vector<std::vector<Rat>> N(n, std::vector<Rat>(n, Rat(0)));
    bool nz = false;
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        if (M[i][l] == 0) continue;
        for (int j = 0; j < n; ++j)
          if (R[l][j] != 0) {
            N[i][j] += M[i][l] * R[l][j];
            nz = true;
          }
      }
    if (!nz) return Series();
    M = std::move(N);
  }
  Rat v = M[pos.i][pos.j];
  if (u.is_unit() && pos.i == pos.j) v -= 1;  // t_ii = x_ii - 1 against the unit
  return Series(v);
}

Series pairing_mono(const PairingSpec& pr, const Monomial& f, const Monomial& u) {
  const int k = f.degree();
  if (k == 0) return Series(Rat(u.is_unit() ? 1 : 0));
  if (k == 1) return pairing_gen(pr, f.w[0], u);
  const Window& w = pr.uh->window;

  // fast path: every u-letter acts diagonally with no dressing (pure cartan
  // words); a slot accepts a letter iff its diagonal entry is 1, and each
  // slot must catch at least one letter.
  bool diag = true;
  for (uint16_t g : u.w) {
    for (const auto& pos : pr.fpos) {
      const auto& R = pr.rho[pos.block][g];
      for (size_t a = 0; a < R.size() && diag; ++a)
        for (size_t b = 0; b < R.size(); ++b)
          if (a != b && R[a][b] != 0) diag = false;
      if (!pr.lamL[pos.block][g].empty() || !pr.lamR[pos.block][g].empty()) diag = false;
      if (!diag) break;
    }
    if (!diag) break;
  }
  if (diag) {
    for (int s = 0; s < k; ++s) {
      const auto& pos = pr.fpos[f.w[s]];
      if (pos.i != pos.j) return Series();  // off-diagonal slot sees no letter
    }
    // inclusion-exclusion over slots forced empty
    Rat total(0);
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      Rat prod(1);
      for (uint16_t g : u.w) {
        Rat s(0);
        for (int slot = 0; slot < k; ++slot) {
          if (mask & (1u << slot)) continue;
          const auto& pos = pr.fpos[f.w[slot]];
          s += pr.rho[pos.block][g][pos.i][pos.i];
        }
        prod *= s;
        if (prod == 0) break;
      }
      total += (__builtin_popcount(mask) % 2 ? -prod : prod);
    }
    return Series(total);
  }

  // generic fold: choose the Δ-slot of each u-letter; the chosen slot sees
  // ρ'(g), earlier slots its left dressing, later slots its right dressing.
  std::vector<std::vector<Series>> state(k);  // row vector per slot, dim n+1
  std::vector<int> dims(k);
  for (int s = 0; s < k; ++s) {
    int n = pr.dim(pr.fpos[f.w[s]].block);
    dims[s] = n + 1;
    state[s].assign(n + 1, Series());
  }
  Series out;

  auto diag_apply = [&](std::vector<Series>& v, int block, const std::vector<Rat>& lam,
                        int n) {
    if (lam.empty()) return;  // dressing is the identity
    for (int i = 0; i < n; ++i) {
      if (v[i].is_zero() || lam[i] == 0) continue;
      Series e = series_exp(Series::monomial(lam[i], 1), w);
      v[i] = (v[i] * e).capped(w.order);
    }
    (void)block;
  };

  std::function<void(size_t)> rec = [&](size_t li) {
    if (li == u.w.size()) {
      // contract with the functional: ρ-entry minus δ·τ-entry per slot
      Series acc = Series::one();
      for (int s = 0; s < k && !acc.is_zero(); ++s) {
        const auto& pos = pr.fpos[f.w[s]];
        Series v = state[s][pos.j];
        if (pos.i == pos.j) v -= state[s][dims[s] - 1];
        acc = (acc * v).capped(w.order);
      }
      out += acc;
      return;
    }
    uint16_t g = u.w[li];
    auto saved = state;
    for (int j = 0; j < k; ++j) {
      state = saved;
      bool dead = false;
      for (int s = 0; s < k && !dead; ++s) {
        const auto& pos = pr.fpos[f.w[s]];
        int n = dims[s] - 1;
        if (s < j) {
          diag_apply(state[s], pos.block, pr.lamL[pos.block][g], n);
        } else if (s > j) {
          diag_apply(state[s], pos.block, pr.lamR[pos.block][g], n);
        } else {
          const auto& R = pr.rho[pos.block][g];
          std::vector<Series> nv(n + 1);
          for (int b = 0; b < n; ++b) {
            Series x;
            for (int a = 0; a < n; ++a)
              if (R[a][b] != 0 && !state[s][a].is_zero())
                x += state[s][a].scaled(R[a][b]);
            nv[b] = x;
          }
          // τ-component: ε(g) = 0 on all generators
          state[s] = std::move(nv);
          dead = true;
          for (const auto& x : state[s])
            if (!x.is_zero()) dead = false;
        }
      }
      if (!dead) rec(li + 1);
    }
    state = saved;
  };

  // initialize each slot with the unit functional row (ρ-row i_s plus τ)
  for (int s = 0; s < k; ++s) {
    state[s][pr.fpos[f.w[s]].i] = Series::one();
    state[s][dims[s] - 1] = Series::one();
  }
  rec(0);
  return out.capped(w.order);
}

Series pairing_eval(const PairingSpec& pr, const AlgElem& f, const AlgElem& u) {
  if (f.pres() != pr.fh || u.pres() != pr.uh)
    throw DomainMismatch("pairing arguments from wrong presentations");
  if (f.degree() > pr.fh->word_cut())
    throw DegreeOverflow("pairing argument beyond the degree window");
  const Window& w = pr.uh->window;
  Series out;
  for (const auto& [fm, fc] : f.terms())
    for (const auto& [um, uc] : u.terms()) {
      Series c = (fc * uc).capped(w.order);
      if (c.is_zero()) continue;
      out += c * pairing_mono(pr, fm, um);
    }
  return out.capped(w.order);
}

Series pairing_eval2(const PairingSpec& pr, const AlgElem& f1, const AlgElem& f2,
                     const TensorElem& T) {
  Series out;
  for (const auto& [m, c] : T.terms()) {
    AlgElem u1(pr.uh), u2(pr.uh);
    u1.add_term(m[0], Series::one());
    u2.add_term(m[1], Series::one());
    Series a = pairing_eval(pr, f1, u1);
    if (a.is_zero()) continue;
    Series b = pairing_eval(pr, f2, u2);
    out += c * a * b;
  }
  return out.capped(pr.uh->window.order);
}

Certificate pairing_certificate(const PairingSpec& pr, int bound) {
  Certificate cert;
  cert.claim = "pairing between '" + pr.fh->name + "' and '" + pr.uh->name +
               "' respects all relations up to degree " + std::to_string(bound);
  cert.tag = "forms.pairing-well-defined";
  cert.order = pr.uh->window.order;
  cert.degree = bound;
  auto fb = basis_monomials(*pr.fh, bound);
  auto ub = basis_monomials(*pr.uh, bound);
  const int N = pr.uh->window.order;

  for (size_t ri = 0; ri < pr.fh->rules.size(); ++ri) {
    const auto& r = pr.fh->rules[ri];
    AlgElem lhs(pr.fh);
    lhs.add_term(Monomial(r.lhs), Series::one());
    for (const auto& um : ub) {
      AlgElem u(pr.uh);
      u.add_term(um, Series::one());
      if (!pairing_eval(pr, lhs, u).equal_upto(pairing_eval(pr, r.rhs, u), N)) {
        cert.fail("qfsha rule " + std::to_string(ri) + " against quea monomial");
        return cert;
      }
    }
  }
  for (size_t ri = 0; ri < pr.uh->rules.size(); ++ri) {
    const auto& r = pr.uh->rules[ri];
    AlgElem lhs(pr.uh);
    lhs.add_term(Monomial(r.lhs), Series::one());
    for (const auto& fm : fb) {
      AlgElem f(pr.fh);
      f.add_term(fm, Series::one());
      if (!pairing_eval(pr, f, lhs).equal_upto(pairing_eval(pr, f, r.rhs), N)) {
        cert.fail("quea rule " + std::to_string(ri) + " against qfsha monomial '" +
                  f.str() + "'");
        return cert;
      }
    }
  }
  return cert;
}

MultiForm cocycle_from_twist(const TensorElem& F, const PairingSpec& pr) {
  if (F.pres() != pr.uh) throw DomainMismatch("twist lives on the wrong presentation");
  MultiForm r(pr.fh, 2, pr.fh->degree);
  auto FF = std::make_shared<const TensorElem>(F);
  auto keep = std::make_shared<const PairingSpec>(pr);
  r.set_evaluator([FF, keep](const std::vector<Monomial>& tuple) {
    AlgElem f1(keep->fh), f2(keep->fh);
    f1.add_term(tuple[0], Series::one());
    f2.add_term(tuple[1], Series::one());
    return pairing_eval2(*keep, f1, f2, *FF);
  });
  return r;
}

}  // namespace qg
