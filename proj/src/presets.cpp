#include "qg/presets.hpp"

#include <algorithm>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

AlgElem cartan_combo(const Presentation* p, const std::map<int, Rat>& combo) {
  AlgElem e(p);
  for (const auto& [g, c] : combo)
    e += AlgElem::gen(p, g).scaled(Series(c));
  return e;
}

AlgElem cartan_exp(const Presentation* p, const std::map<int, Rat>& combo) {
  return elem_exp(cartan_combo(p, combo).shifted(1));
}

std::shared_ptr<Presentation> clone_presentation(const Presentation& p) {
  auto q = std::make_shared<Presentation>(p);
  for (auto& r : q->rules) r.rhs = r.rhs.rebound(q.get());
  for (auto& t : q->hopf.coproduct) t = t.rebound(q.get());
  for (auto& a : q->hopf.antipode) a = a.rebound(q.get());
  return q;
}

namespace {

// -- shared quea scaffolding -------------------------------------------------

struct RootSpec {
  std::string e, f;
  std::map<std::string, Rat> weight;  // [Γ_k, E] = +w_k E, [Γ_k, F] = -w_k F
  std::map<std::string, Rat> tplus, tminus;
  int serre_with = -1;  // index of an adjacent root, if any
};

std::shared_ptr<Presentation> build_quea(const std::string& name,
                                         const std::vector<std::string>& low,
                                         const std::vector<std::string>& car,
                                         const std::vector<std::string>& high,
                                         const std::vector<RootSpec>& roots, Window w,
                                         int D, bool experimental = false) {
  auto P = std::make_shared<Presentation>();
  P->name = name;
  P->kind = Kind::Quea;
  // build two orders wide: quotients by valuation-1 scalars (the sinh
  // denominator) must stay exact at the public order
  Window wide{w.order + 2, w.floor};
  P->window = wide;
  P->degree = D;
  P->experimental = experimental;
  for (const auto& n : low) P->gens.push_back({n, Sort::Lowering, 0, 0});
  for (const auto& n : car) P->gens.push_back({n, Sort::Cartan, 0, 0});
  for (const auto& n : high) P->gens.push_back({n, Sort::Raising, 0, 0});
  for (size_t i = 0; i < roots.size(); ++i) {
    auto& r = roots[i];
    P->gens[P->gen_id(r.e)].a = static_cast<int>(i) + 1;
    P->gens[P->gen_id(r.f)].a = static_cast<int>(i) + 1;
  }

  auto u16 = [&](const std::string& n) { return static_cast<uint16_t>(P->gen_id(n)); };
  auto word = [&](std::initializer_list<std::string> ns) {
    std::vector<uint16_t> ww;
    for (const auto& n : ns) ww.push_back(u16(n));
    return ww;
  };
  auto mono_elem = [&](std::initializer_list<std::string> ns, const Series& c) {
    AlgElem e(P.get());
    e.add_term(Monomial(word(ns)), c);
    return e;
  };

  // cartan block commutes: sort by declaration order
  for (size_t a = 0; a < car.size(); ++a)
    for (size_t b = a + 1; b < car.size(); ++b)
      P->rules.push_back({word({car[b], car[a]}), mono_elem({car[a], car[b]}, Series::one())});

  // [Γ_k, E] = +w E  and  [Γ_k, F] = -w F
  for (const auto& r : roots) {
    for (const auto& k : car) {
      Rat wt = r.weight.count(k) ? r.weight.at(k) : Rat(0);
      P->rules.push_back(
          {word({r.e, k}), mono_elem({k, r.e}, Series::one()) +
                               mono_elem({r.e}, Series(-wt))});
      P->rules.push_back(
          {word({k, r.f}), mono_elem({r.f, k}, Series::one()) +
                               mono_elem({r.f}, Series(-wt))});
    }
  }

  Series q = series_exp(Series::monomial(Rat(1), 1), wide);
  Series qi = series_exp(Series::monomial(Rat(-1), 1), wide);
  Series den = q - qi;

  // [E_i, F_j] = δ_ij (e^{hT_i^+} - e^{-hT_i^-}) / (q - q^{-1})
  std::vector<RootDatum> rdata;
  for (const auto& r : roots) {
    RootDatum rd;
    rd.e_gen = P->gen_id(r.e);
    rd.f_gen = P->gen_id(r.f);
    for (const auto& [n, c] : r.tplus) rd.t_plus[P->gen_id(n)] = c;
    for (const auto& [n, c] : r.tminus) rd.t_minus[P->gen_id(n)] = c;
    rdata.push_back(rd);
  }
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = 0; j < roots.size(); ++j) {
      AlgElem rhs = mono_elem({roots[j].f, roots[i].e}, Series::one());
      if (i == j) {
        AlgElem num = cartan_exp(P.get(), rdata[i].t_plus) -
                      elem_exp(cartan_combo(P.get(), rdata[i].t_minus).shifted(1).scaled(
                          Series(Rat(-1))));
        AlgElem quot(P.get());
        for (const auto& [m, c] : num.terms())
          quot.add_term(m, series_div(c, den, wide));
        rhs += quot;
      }
      P->rules.push_back({word({roots[i].e, roots[j].f}), rhs});
    }

  // quantum Serre rules between adjacent roots
  Series qpqi = q + qi;
  for (size_t i = 0; i < roots.size(); ++i) {
    int j = roots[i].serre_with;
    if (j < 0) continue;
    const auto& ri = roots[i];
    const auto& rj = roots[static_cast<size_t>(j)];
    // convention: i < j in generator order; reducible patterns start with the
    // bigger letter
    P->rules.push_back({word({rj.e, ri.e, ri.e}),
                        mono_elem({ri.e, rj.e, ri.e}, qpqi) -
                            mono_elem({ri.e, ri.e, rj.e}, Series::one())});
    P->rules.push_back({word({rj.e, rj.e, ri.e}),
                        mono_elem({rj.e, ri.e, rj.e}, qpqi) -
                            mono_elem({ri.e, rj.e, rj.e}, Series::one())});
    P->rules.push_back({word({rj.f, ri.f, ri.f}),
                        mono_elem({ri.f, rj.f, ri.f}, qpqi) -
                            mono_elem({ri.f, ri.f, rj.f}, Series::one())});
    P->rules.push_back({word({rj.f, rj.f, ri.f}),
                        mono_elem({rj.f, ri.f, rj.f}, qpqi) -
                            mono_elem({ri.f, rj.f, rj.f}, Series::one())});
  }

  // Hopf tables
  size_t ng = P->gens.size();
  P->hopf.coproduct.resize(ng);
  P->hopf.counit.assign(ng, Series());
  P->hopf.antipode.resize(ng);
  for (const auto& k : car) {
    int g = P->gen_id(k);
    AlgElem x = AlgElem::gen(P.get(), g);
    AlgElem one = AlgElem::unit(P.get());
    P->hopf.coproduct[g] =
        TensorElem::outer({x, one}) + TensorElem::outer({one, x});
    P->hopf.antipode[g] = -x;
  }
  for (size_t i = 0; i < roots.size(); ++i) {
    const auto& rd = rdata[i];
    AlgElem one = AlgElem::unit(P.get());
    AlgElem E = AlgElem::gen(P.get(), rd.e_gen);
    AlgElem F = AlgElem::gen(P.get(), rd.f_gen);
    AlgElem Kp = cartan_exp(P.get(), rd.t_plus);                            // e^{hT+}
    std::map<int, Rat> neg_minus;
    for (const auto& [g, c] : rd.t_minus) neg_minus[g] = -c;
    AlgElem Kmi = cartan_exp(P.get(), neg_minus);                           // e^{-hT-}
    std::map<int, Rat> neg_plus;
    for (const auto& [g, c] : rd.t_plus) neg_plus[g] = -c;
    AlgElem Kpi = cartan_exp(P.get(), neg_plus);                            // e^{-hT+}
    AlgElem Km = cartan_exp(P.get(), rd.t_minus);                           // e^{hT-}

    P->hopf.coproduct[rd.e_gen] =
        TensorElem::outer({E, one}) + TensorElem::outer({Kp, E});
    P->hopf.coproduct[rd.f_gen] =
        TensorElem::outer({F, Kmi}) + TensorElem::outer({one, F});
    P->hopf.antipode[rd.e_gen] = -P->mul(Kpi, E);
    P->hopf.antipode[rd.f_gen] = -P->mul(F, Km);
  }
  P->roots = rdata;

  // settle on the public window
  P->window = w;
  for (auto& r : P->rules) r.rhs = r.rhs.capped(w.order);
  for (auto& t : P->hopf.coproduct) t = t.capped(w.order);
  for (auto& a : P->hopf.antipode) a = a.capped(w.order);
  return P;
}

std::shared_ptr<Presentation> build_gl2_quea(Window w, int D) {
  RootSpec r;
  r.e = "E";
  r.f = "F";
  r.weight = {{"G1", Rat(1)}, {"G2", Rat(-1)}};
  r.tplus = {{"G1", Rat(1)}, {"G2", Rat(-1)}};
  r.tminus = r.tplus;
  return build_quea("gl2-quea", {"F"}, {"G1", "G2"}, {"E"}, {r}, w, D);
}

std::shared_ptr<Presentation> build_gl3_quea(Window w, int D) {
  RootSpec r1, r2;
  r1.e = "E1";
  r1.f = "F1";
  r1.weight = {{"G1", Rat(1)}, {"G2", Rat(-1)}};
  r1.tplus = {{"G1", Rat(1)}, {"G2", Rat(-1)}};
  r1.tminus = r1.tplus;
  r1.serre_with = 1;
  r2.e = "E2";
  r2.f = "F2";
  r2.weight = {{"G2", Rat(1)}, {"G3", Rat(-1)}};
  r2.tplus = {{"G2", Rat(1)}, {"G3", Rat(-1)}};
  r2.tminus = r2.tplus;
  return build_quea("gl3-quea", {"F1", "F2"}, {"G1", "G2", "G3"}, {"E1", "E2"},
                    {r1, r2}, w, D);
}

std::shared_ptr<Presentation> build_gl2_double_quea(Window w, int D) {
  RootSpec r;
  r.e = "E";
  r.f = "F";
  r.weight = {{"Gm1", Rat(1)}, {"Gm2", Rat(-1)}, {"Gp1", Rat(1)}, {"Gp2", Rat(-1)}};
  r.tplus = {{"Gp1", Rat(1)}, {"Gp2", Rat(-1)}};
  r.tminus = {{"Gm1", Rat(1)}, {"Gm2", Rat(-1)}};
  return build_quea("gl2-double-quea", {"F"}, {"Gm1", "Gm2", "Gp1", "Gp2"}, {"E"}, {r},
                    w, D, /*experimental=*/true);
}

// -- qfsha scaffolding -------------------------------------------------------

/// a = 1 + (nilpotent inside the window): geometric inverse.
AlgElem inv_unital(const AlgElem& a) {
  const Presentation* p = a.pres();
  AlgElem u = AlgElem::unit(p) - a;
  AlgElem sum = AlgElem::unit(p);
  AlgElem pw = AlgElem::unit(p);
  int bound = p->window.order + p->window.floor + p->word_cut() + 4;
  for (int k = 1; k <= bound; ++k) {
    pw = p->mul(pw, u);
    if (pw.is_zero()) return sum;
    sum += pw;
  }
  throw NotUnipotent("inverse of a non-unital element");
}

std::shared_ptr<Presentation> build_gl2_qfsha(Window w, int D) {
  auto P = std::make_shared<Presentation>();
  P->name = "gl2-qfsha";
  P->kind = Kind::Qfsha;
  P->window = w;
  P->degree = D;
  // augmentation coordinates t_ij = x_ij - δ_ij, row-major order
  P->gens = {{"t11", Sort::MatrixEntry, 1, 1},
             {"t12", Sort::MatrixEntry, 1, 2},
             {"t21", Sort::MatrixEntry, 2, 1},
             {"t22", Sort::MatrixEntry, 2, 2}};

  Series q = series_exp(Series::monomial(Rat(1), 1), w);
  Series qi = series_exp(Series::monomial(Rat(-1), 1), w);
  Series qim1 = qi - Series::one();
  Series qmqi = q - qi;

  auto G = [&](const std::string& n) { return static_cast<uint16_t>(P->gen_id(n)); };
  auto mono = [&](std::initializer_list<std::string> ns, const Series& c) {
    AlgElem e(P.get());
    std::vector<uint16_t> ww;
    for (const auto& n : ns) ww.push_back(G(n));
    e.add_term(Monomial(ww), c);
    return e;
  };

  // x_ij x_ik = q x_ik x_ij (rows), x_ik x_hk = q x_hk x_ik (columns),
  // x_12 x_21 = x_21 x_12, [x_11, x_22] = (q - q^{-1}) x_12 x_21,
  // rewritten in t coordinates.
  P->rules.push_back({{G("t12"), G("t11")},
                      mono({"t11", "t12"}, qi) + mono({"t12"}, qim1)});
  P->rules.push_back({{G("t21"), G("t11")},
                      mono({"t11", "t21"}, qi) + mono({"t21"}, qim1)});
  P->rules.push_back({{G("t21"), G("t12")}, mono({"t12", "t21"}, Series::one())});
  P->rules.push_back({{G("t22"), G("t11")},
                      mono({"t11", "t22"}, Series::one()) -
                          mono({"t12", "t21"}, qmqi)});
  P->rules.push_back({{G("t22"), G("t12")},
                      mono({"t12", "t22"}, qi) + mono({"t12"}, qim1)});
  P->rules.push_back({{G("t22"), G("t21")},
                      mono({"t21", "t22"}, qi) + mono({"t21"}, qim1)});

  size_t ng = P->gens.size();
  P->hopf.coproduct.resize(ng);
  P->hopf.counit.assign(ng, Series());
  P->hopf.antipode.resize(ng);
  AlgElem one = AlgElem::unit(P.get());
  auto gen = [&](const std::string& n) { return AlgElem::gen(P.get(), P->gen_id(n)); };
  auto t = [&](int i, int j) { return gen("t" + std::to_string(i) + std::to_string(j)); };

  // Δ(t_ij) = t_ij⊗1 + 1⊗t_ij + Σ_k t_ik⊗t_kj
  for (int i = 1; i <= 2; ++i)
    for (int j = 1; j <= 2; ++j) {
      int g = P->gen_id("t" + std::to_string(i) + std::to_string(j));
      TensorElem d = TensorElem::outer({t(i, j), one}) +
                     TensorElem::outer({one, t(i, j)});
      for (int k = 1; k <= 2; ++k) d += TensorElem::outer({t(i, k), t(k, j)});
      P->hopf.coproduct[g] = d;
    }

  // antipode via the quantum determinant: S(x) = adjugate(x) Dq^{-1}
  AlgElem Dq = P->mul(one + t(1, 1), one + t(2, 2)) -
               P->mul(t(1, 2), t(2, 1)).scaled(q);
  AlgElem Dinv = inv_unital(Dq);
  P->hopf.antipode[P->gen_id("t11")] = P->mul(one + t(2, 2), Dinv) - one;
  P->hopf.antipode[P->gen_id("t12")] = P->mul(t(1, 2), Dinv).scaled(-qi);
  P->hopf.antipode[P->gen_id("t21")] = P->mul(t(2, 1), Dinv).scaled(-q);
  P->hopf.antipode[P->gen_id("t22")] = P->mul(one + t(1, 1), Dinv) - one;
  return P;
}

std::shared_ptr<Presentation> build_gl2_double_qfsha_algebra(Window w, int D) {
  auto P = std::make_shared<Presentation>();
  P->name = "gl2-double-qfsha";
  P->kind = Kind::Qfsha;
  P->window = w;
  P->degree = D;
  P->experimental = true;
  // upper-triangular + block, then lower-triangular - block
  P->gens = {{"tp11", Sort::MatrixEntry, 1, 1}, {"tp12", Sort::MatrixEntry, 1, 2},
             {"tp22", Sort::MatrixEntry, 2, 2}, {"tm11", Sort::MatrixEntry, 1, 1},
             {"tm21", Sort::MatrixEntry, 2, 1}, {"tm22", Sort::MatrixEntry, 2, 2}};

  Series q = series_exp(Series::monomial(Rat(1), 1), w);
  Series qi = series_exp(Series::monomial(Rat(-1), 1), w);
  Series qim1 = qi - Series::one();

  auto G = [&](const std::string& n) { return static_cast<uint16_t>(P->gen_id(n)); };
  auto mono = [&](std::initializer_list<std::string> ns, const Series& c) {
    AlgElem e(P.get());
    std::vector<uint16_t> ww;
    for (const auto& n : ns) ww.push_back(G(n));
    e.add_term(Monomial(ww), c);
    return e;
  };

  // + block: x11 x12 = q x12 x11, x12 x22 = q x22 x12, [x11, x22] = 0
  P->rules.push_back({{G("tp12"), G("tp11")},
                      mono({"tp11", "tp12"}, qi) + mono({"tp12"}, qim1)});
  P->rules.push_back({{G("tp22"), G("tp12")},
                      mono({"tp12", "tp22"}, qi) + mono({"tp12"}, qim1)});
  P->rules.push_back({{G("tp22"), G("tp11")}, mono({"tp11", "tp22"}, Series::one())});
  // - block: x11 x21 = q x21 x11, x21 x22 = q x22 x21, [x11, x22] = 0
  P->rules.push_back({{G("tm21"), G("tm11")},
                      mono({"tm11", "tm21"}, qi) + mono({"tm21"}, qim1)});
  P->rules.push_back({{G("tm22"), G("tm21")},
                      mono({"tm21", "tm22"}, qi) + mono({"tm21"}, qim1)});
  P->rules.push_back({{G("tm22"), G("tm11")}, mono({"tm11", "tm22"}, Series::one())});
  // blocks commute entrywise
  for (const auto& m : {"tm11", "tm21", "tm22"})
    for (const auto& p : {"tp11", "tp12", "tp22"})
      P->rules.push_back({{G(m), G(p)}, mono({p, m}, Series::one())});

  size_t ng = P->gens.size();
  P->hopf.coproduct.resize(ng);
  P->hopf.counit.assign(ng, Series());
  P->hopf.antipode.resize(ng);
  return P;
}

// -- pairings ----------------------------------------------------------------

PairingSpec make_gl2_pairing(const PresPtr& fh, const PresPtr& uh) {
  PairingSpec pr;
  pr.fh = fh.get();
  pr.uh = uh.get();
  pr.fpos.resize(fh->gens.size());
  for (size_t g = 0; g < fh->gens.size(); ++g)
    pr.fpos[g] = {0, fh->gens[g].a - 1, fh->gens[g].b - 1};
  auto zero = std::vector<std::vector<Rat>>(2, std::vector<Rat>(2, Rat(0)));
  pr.rho.assign(1, std::vector<std::vector<std::vector<Rat>>>(uh->gens.size(), zero));
  pr.lamL.assign(1, std::vector<std::vector<Rat>>(uh->gens.size()));
  pr.lamR = pr.lamL;
  auto& R = pr.rho[0];
  R[uh->gen_id("G1")][0][0] = 1;
  R[uh->gen_id("G2")][1][1] = 1;
  R[uh->gen_id("E")][0][1] = 1;
  R[uh->gen_id("F")][1][0] = 1;
  pr.lamL[0][uh->gen_id("E")] = {Rat(1), Rat(-1)};   // Δ(E) = E⊗1 + e^{hT+}⊗E
  pr.lamR[0][uh->gen_id("F")] = {Rat(-1), Rat(1)};   // Δ(F) = F⊗e^{-hT-} + 1⊗F
  return pr;
}

PairingSpec make_double_pairing(const PresPtr& fh, const PresPtr& uh) {
  PairingSpec pr;
  pr.fh = fh.get();
  pr.uh = uh.get();
  pr.fpos.resize(fh->gens.size());
  for (size_t g = 0; g < fh->gens.size(); ++g) {
    int block = fh->gens[g].name[1] == 'p' ? 0 : 1;
    pr.fpos[g] = {block, fh->gens[g].a - 1, fh->gens[g].b - 1};
  }
  auto zero = std::vector<std::vector<Rat>>(2, std::vector<Rat>(2, Rat(0)));
  pr.rho.assign(2, std::vector<std::vector<std::vector<Rat>>>(uh->gens.size(), zero));
  pr.lamL.assign(2, std::vector<std::vector<Rat>>(uh->gens.size()));
  pr.lamR = pr.lamL;
  // + block pairs with the upper Borel part (Γ+, E); the other letters kill it
  pr.rho[0][uh->gen_id("Gp1")][0][0] = 1;
  pr.rho[0][uh->gen_id("Gp2")][1][1] = 1;
  pr.rho[0][uh->gen_id("E")][0][1] = 1;
  pr.lamL[0][uh->gen_id("E")] = {Rat(1), Rat(-1)};  // e^{hT+} dressing, T+ in Γ+
  // - block pairs with the lower Borel part (Γ-, F)
  pr.rho[1][uh->gen_id("Gm1")][0][0] = 1;
  pr.rho[1][uh->gen_id("Gm2")][1][1] = 1;
  pr.rho[1][uh->gen_id("F")][1][0] = 1;
  pr.lamR[1][uh->gen_id("F")] = {Rat(-1), Rat(1)};  // e^{-hT-} dressing, T- in Γ-
  return pr;
}

// -- double qfsha: dual-basis extraction of the Hopf tables -------------------

using SMat = std::vector<std::vector<Series>>;

SMat mat_inv(const SMat& A, const Window& w) {
  size_t n = A.size();
  SMat M = A;
  SMat I(n, std::vector<Series>(n));
  for (size_t i = 0; i < n; ++i) I[i][i] = Series::one();
  for (size_t col = 0; col < n; ++col) {
    size_t piv = n;
    for (size_t r = col; r < n; ++r) {
      auto v = M[r][col].valuation();
      if (v && *v == 0) {
        piv = r;
        break;
      }
    }
    if (piv == n)
      throw ValuationCertificateFailure(
          "pairing Gram matrix is degenerate at truncation");
    std::swap(M[piv], M[col]);
    std::swap(I[piv], I[col]);
    Series d = M[col][col];
    for (size_t j = 0; j < n; ++j) {
      M[col][j] = series_div(M[col][j], d, w);
      I[col][j] = series_div(I[col][j], d, w);
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == col || M[r][col].is_zero()) continue;
      Series f = M[r][col];
      for (size_t j = 0; j < n; ++j) {
        M[r][j] -= (f * M[col][j]).capped(w.order);
        I[r][j] -= (f * I[col][j]).capped(w.order);
      }
    }
  }
  return I;
}

struct WeightKey {
  int e = 0, f = 0;
  auto operator<=>(const WeightKey&) const = default;
};

void derive_double_tables(Presentation& F, const Presentation& U,
                          const PairingSpec& pr) {
  const Window& w = F.window;
  const int N = w.order;
  int tp12 = F.gen_id("tp12"), tm21 = F.gen_id("tm21");
  int Eg = U.gen_id("E"), Fg = U.gen_id("F");

  auto fkey = [&](const Monomial& m) {
    WeightKey k;
    for (auto g : m.w) {
      if (g == tp12) ++k.e;
      if (g == tm21) ++k.f;
    }
    return k;
  };
  auto ukey = [&](const Monomial& m) {
    WeightKey k;
    for (auto g : m.w) {
      if (g == Eg) ++k.e;
      if (g == Fg) ++k.f;
    }
    return k;
  };

  // mirrored PBW dual monomial of an f-monomial
  std::vector<int> mirror(F.gens.size());
  mirror[F.gen_id("tp11")] = U.gen_id("Gp1");
  mirror[F.gen_id("tp22")] = U.gen_id("Gp2");
  mirror[F.gen_id("tm11")] = U.gen_id("Gm1");
  mirror[F.gen_id("tm22")] = U.gen_id("Gm2");
  mirror[tp12] = Eg;
  mirror[tm21] = Fg;
  auto umirror = [&](const Monomial& m) {
    std::vector<uint16_t> cnt(U.gens.size(), 0);
    for (auto g : m.w) ++cnt[mirror[g]];
    std::vector<uint16_t> ww;
    for (uint16_t g = 0; g < U.gens.size(); ++g)
      for (int c = 0; c < cnt[g]; ++c) ww.push_back(g);
    return Monomial(ww);  // F < Γ- < Γ+ < E is the declaration order
  };

  auto fmons = basis_monomials(F, F.degree);
  std::map<WeightKey, std::vector<size_t>> blocks;
  for (size_t i = 0; i < fmons.size(); ++i) blocks[fkey(fmons[i])].push_back(i);

  auto felem = [&](const Monomial& m) {
    AlgElem e(&F);
    e.add_term(m, Series::one());
    return e;
  };
  auto uelem = [&](const Monomial& m) {
    AlgElem e(&U);
    e.add_term(m, Series::one());
    return e;
  };

  // per-block Gram inverses
  std::map<WeightKey, SMat> ginv;
  std::map<WeightKey, std::vector<Monomial>> umons;
  for (const auto& [key, idx] : blocks) {
    size_t n = idx.size();
    SMat G(n, std::vector<Series>(n));
    std::vector<Monomial> us;
    for (size_t j = 0; j < n; ++j) us.push_back(umirror(fmons[idx[j]]));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        G[i][j] = pairing_eval(pr, felem(fmons[idx[i]]), uelem(us[j]));
    ginv[key] = mat_inv(G, w);
    umons[key] = us;
  }

  // Δ(t): V[u1][u2] = <t, u1·u2>, then C = Ginv^T V Ginv blockwise.
  auto genkeys = [&](int g) {
    WeightKey k;
    if (g == tp12) k.e = 1;
    if (g == tm21) k.f = 1;
    return k;
  };
  std::vector<TensorElem> cop(F.gens.size());
  std::vector<AlgElem> anti(F.gens.size());
  for (size_t g = 0; g < F.gens.size(); ++g) {
    cop[g] = TensorElem(&F, 2);
    anti[g] = AlgElem(&F);
  }

  for (const auto& [k1, idx1] : blocks)
    for (const auto& [k2, idx2] : blocks) {
      // which generators can receive contributions from this block pair?
      std::vector<int> targets;
      for (size_t g = 0; g < F.gens.size(); ++g) {
        WeightKey kg = genkeys(static_cast<int>(g));
        if ((k1.e + k2.e) - (k1.f + k2.f) == kg.e - kg.f) targets.push_back(g);
      }
      if (targets.empty()) continue;
      size_t n1 = idx1.size(), n2 = idx2.size();
      std::vector<SMat> V(targets.size(), SMat(n1, std::vector<Series>(n2)));
      for (size_t a = 0; a < n1; ++a)
        for (size_t b = 0; b < n2; ++b) {
          AlgElem prod = U.mul(uelem(umons[k1][a]), uelem(umons[k2][b]));
          for (size_t t = 0; t < targets.size(); ++t)
            V[t][a][b] = pairing_eval(pr, felem(Monomial::gen(targets[t])), prod);
        }
      const SMat& A = ginv.at(k1);
      const SMat& B = ginv.at(k2);
      for (size_t t = 0; t < targets.size(); ++t) {
        // C = A^T V B
        for (size_t i = 0; i < n1; ++i)
          for (size_t j = 0; j < n2; ++j) {
            Series c;
            for (size_t a = 0; a < n1; ++a) {
              if (A[a][i].is_zero()) continue;
              Series row;
              for (size_t b = 0; b < n2; ++b) {
                if (V[t][a][b].is_zero() || B[b][j].is_zero()) continue;
                row += V[t][a][b] * B[b][j];
              }
              c += A[a][i] * row;
            }
            c = c.capped(N);
            if (!c.is_zero())
              cop[targets[t]].add_term({fmons[idx1[i]], fmons[idx2[j]]}, c);
          }
      }
    }

  // S(t): <S_F(t), u> = <t, S_U(u)>
  for (size_t g = 0; g < F.gens.size(); ++g) {
    WeightKey kg = genkeys(static_cast<int>(g));
    for (const auto& [key, idx] : blocks) {
      if (key.e - key.f != kg.e - kg.f) continue;
      size_t n = idx.size();
      std::vector<Series> vec(n);
      for (size_t j = 0; j < n; ++j)
        vec[j] = pairing_eval(pr, felem(Monomial::gen(static_cast<uint16_t>(g))),
                              antipode(U, uelem(umons.at(key)[j])));
      const SMat& A = ginv.at(key);
      for (size_t i = 0; i < n; ++i) {
        Series c;
        for (size_t j = 0; j < n; ++j) c += A[j][i] * vec[j];
        c = c.capped(N);
        if (!c.is_zero()) anti[g].add_term(fmons[idx[i]], c);
      }
    }
  }

  F.hopf.coproduct = std::move(cop);
  F.hopf.antipode = std::move(anti);
}

// -- registry ----------------------------------------------------------------

std::string cache_key(const std::string& name, Window w, int D) {
  std::ostringstream os;
  os << name << "/" << w.order << "/" << w.floor << "/" << D;
  return os.str();
}

std::map<std::string, PresPtr>& registry() {
  static std::map<std::string, PresPtr> reg;
  return reg;
}

}  // namespace

PresPtr preset(const std::string& name, Window w, int D) {
  auto key = cache_key(name, w, D);
  auto it = registry().find(key);
  if (it != registry().end()) return it->second;

  std::shared_ptr<Presentation> p;
  if (name == "gl2-quea")
    p = build_gl2_quea(w, D);
  else if (name == "gl3-quea")
    p = build_gl3_quea(w, D);
  else if (name == "gl2-qfsha")
    p = build_gl2_qfsha(w, D);
  else if (name == "gl2-double-quea")
    p = build_gl2_double_quea(w, D);
  else if (name == "gl2-double-qfsha") {
    auto u = preset("gl2-double-quea", w, D);
    p = build_gl2_double_qfsha_algebra(w, D);
    PairingSpec pr = make_double_pairing(p, u);
    derive_double_tables(*p, *u, pr);
  } else {
    throw ConfigParseError("unknown preset '" + name + "'");
  }
  registry()[key] = p;
  return p;
}

PresPtr preset(const std::string& name) { return preset(name, Window{}, 4); }

std::vector<std::string> preset_names() {
  return {"gl2-quea", "gl3-quea", "gl2-qfsha", "gl2-double-quea", "gl2-double-qfsha"};
}

PairingSpec preset_pairing(const std::string& family, Window w, int D) {
  if (family == "gl2")
    return make_gl2_pairing(preset("gl2-qfsha", w, D), preset("gl2-quea", w, D));
  if (family == "gl2-double")
    return make_double_pairing(preset("gl2-double-qfsha", w, D),
                               preset("gl2-double-quea", w, D));
  throw ConfigParseError("unknown pairing family '" + family + "'");
}

PairingSpec preset_pairing(const std::string& family) {
  return preset_pairing(family, Window{}, 4);
}

}  // namespace qg
