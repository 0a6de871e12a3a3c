#include "qg/ncalg.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

// ---------------------------------------------------------------- AlgElem --

AlgElem AlgElem::unit(const Presentation* p) {
  AlgElem e(p);
  e.t_[Monomial::unit()] = Series::one();
  return e;
}

AlgElem AlgElem::gen(const Presentation* p, int g) {
  AlgElem e(p);
  e.t_[Monomial::gen(static_cast<uint16_t>(g))] = Series::one();
  return e;
}

AlgElem AlgElem::scalar(const Presentation* p, const Series& c) {
  AlgElem e(p);
  if (!c.is_zero()) e.t_[Monomial::unit()] = c;
  return e;
}

int AlgElem::degree() const {
  int d = 0;
  for (const auto& [m, c] : t_) d = std::max(d, m.degree());
  return d;
}

void AlgElem::add_term(const Monomial& m, const Series& c) {
  if (c.is_zero()) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_[m] = c;
  } else {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

AlgElem AlgElem::operator-() const {
  AlgElem r(p_);
  for (const auto& [m, c] : t_) r.t_[m] = -c;
  return r;
}

static void check_same_pres(const Presentation* a, const Presentation* b) {
  if (a && b && a != b)
    throw PresentationMismatch("operands belong to different presentations");
}

AlgElem& AlgElem::operator+=(const AlgElem& o) {
  check_same_pres(p_, o.p_);
  if (!p_) p_ = o.p_;
  for (const auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

AlgElem& AlgElem::operator-=(const AlgElem& o) { return *this += -o; }

AlgElem AlgElem::scaled(const Series& c) const {
  AlgElem r(p_);
  if (c.is_zero()) return r;
  for (const auto& [m, s] : t_) r.add_term(m, s * c);
  return r;
}

AlgElem AlgElem::shifted(int exp) const {
  AlgElem r(p_);
  for (const auto& [m, s] : t_) r.add_term(m, s.shifted(exp));
  return r;
}

AlgElem AlgElem::capped(int order) const {
  AlgElem r(p_);
  for (const auto& [m, s] : t_) r.add_term(m, s.capped(order));
  return r;
}

bool AlgElem::equal_upto(const AlgElem& o, int order) const {
  for (const auto& [m, c] : t_)
    if (!c.equal_upto(o.t_.count(m) ? o.t_.at(m) : Series(), order)) return false;
  for (const auto& [m, c] : o.t_)
    if (!t_.count(m) && !c.equal_upto(Series(), order)) return false;
  return true;
}

AlgElem AlgElem::rebound(const Presentation* p) const {
  AlgElem r = *this;
  r.p_ = p;
  return r;
}

TensorElem TensorElem::rebound(const Presentation* p) const {
  TensorElem r = *this;
  r.p_ = p;
  return r;
}

static std::string word_str(const Presentation* p, const std::vector<uint16_t>& w) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size();) {
    size_t j = i;
    while (j < w.size() && w[j] == w[i]) ++j;
    if (i > 0) os << "*";
    os << (p ? p->gens[w[i]].name : "g" + std::to_string(w[i]));
    if (j - i > 1) os << "^" << (j - i);
    i = j;
  }
  return os.str();
}

std::string AlgElem::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : t_) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")";
    if (!m.is_unit()) os << "*" << word_str(p_, m.w);
    first = false;
  }
  return os.str();
}

// ------------------------------------------------------------- TensorElem --

TensorElem TensorElem::unit(const Presentation* p, int arity) {
  TensorElem e(p, arity);
  e.t_[std::vector<Monomial>(arity)] = Series::one();
  return e;
}

TensorElem TensorElem::outer(const std::vector<AlgElem>& slots) {
  const Presentation* p = slots.empty() ? nullptr : slots[0].pres();
  TensorElem r(p, static_cast<int>(slots.size()));
  std::vector<std::pair<std::vector<Monomial>, Series>> acc;
  acc.push_back({{}, Series::one()});
  for (const auto& s : slots) {
    check_same_pres(p, s.pres());
    std::vector<std::pair<std::vector<Monomial>, Series>> next;
    for (const auto& [tuple, c] : acc)
      for (const auto& [m, d] : s.terms()) {
        auto t2 = tuple;
        t2.push_back(m);
        next.push_back({std::move(t2), c * d});
      }
    acc = std::move(next);
  }
  for (auto& [tuple, c] : acc) r.add_term(tuple, c);
  return r;
}

void TensorElem::add_term(const std::vector<Monomial>& m, const Series& c) {
  if (c.is_zero()) return;
  auto it = t_.find(m);
  if (it == t_.end()) {
    t_[m] = c;
  } else {
    it->second += c;
    if (it->second.is_zero()) t_.erase(it);
  }
}

TensorElem TensorElem::operator-() const {
  TensorElem r(p_, k_);
  for (const auto& [m, c] : t_) r.t_[m] = -c;
  return r;
}

TensorElem& TensorElem::operator+=(const TensorElem& o) {
  check_same_pres(p_, o.p_);
  if (!p_) {
    p_ = o.p_;
    k_ = o.k_;
  }
  if (k_ != o.k_) throw ArityMismatch("tensor arities differ");
  for (const auto& [m, c] : o.t_) add_term(m, c);
  return *this;
}

TensorElem& TensorElem::operator-=(const TensorElem& o) { return *this += -o; }

TensorElem TensorElem::scaled(const Series& c) const {
  TensorElem r(p_, k_);
  if (c.is_zero()) return r;
  for (const auto& [m, s] : t_) r.add_term(m, s * c);
  return r;
}

TensorElem TensorElem::shifted(int exp) const {
  TensorElem r(p_, k_);
  for (const auto& [m, s] : t_) r.add_term(m, s.shifted(exp));
  return r;
}

TensorElem TensorElem::capped(int order) const {
  TensorElem r(p_, k_);
  for (const auto& [m, s] : t_) r.add_term(m, s.capped(order));
  return r;
}

TensorElem TensorElem::permuted(const std::vector<int>& perm) const {
  TensorElem r(p_, k_);
  for (const auto& [m, c] : t_) {
    std::vector<Monomial> m2(k_);
    for (int i = 0; i < k_; ++i) m2[i] = m[perm[i]];
    r.add_term(m2, c);
  }
  return r;
}

AlgElem TensorElem::slot0() const {
  if (k_ != 1) throw ArityMismatch("slot0 needs arity 1");
  AlgElem r(p_);
  for (const auto& [m, c] : t_) r.add_term(m[0], c);
  return r;
}

bool TensorElem::equal_upto(const TensorElem& o, int order) const {
  if (k_ != o.k_) return false;
  for (const auto& [m, c] : t_) {
    auto it = o.t_.find(m);
    if (!c.equal_upto(it == o.t_.end() ? Series() : it->second, order)) return false;
  }
  for (const auto& [m, c] : o.t_)
    if (!t_.count(m) && !c.equal_upto(Series(), order)) return false;
  return true;
}

std::string TensorElem::str() const {
  if (t_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : t_) {
    if (!first) os << " + ";
    os << "(" << c.str() << ")*";
    for (int i = 0; i < k_; ++i) {
      if (i) os << " (x) ";
      os << word_str(p_, m[i].w);
    }
    first = false;
  }
  return os.str();
}

// ----------------------------------------------------------- Presentation --

int Presentation::gen_id(const std::string& n) const {
  for (size_t i = 0; i < gens.size(); ++i)
    if (gens[i].name == n) return static_cast<int>(i);
  throw UnknownGenerator("no generator named '" + n + "'");
}

std::vector<int> Presentation::cartans() const {
  std::vector<int> c;
  for (size_t i = 0; i < gens.size(); ++i)
    if (gens[i].sort == Sort::Cartan) c.push_back(static_cast<int>(i));
  return c;
}

int Presentation::word_cut() const {
  // Rules may trade word degree for h-valuation, so the internal cutoff is
  // D+N: dropped words only affect components with degree+valuation > D+N.
  if (kind == Kind::Qfsha) return degree + window.order;
  return 1 << 20;
}

const AlgElem& Presentation::nf_word(const std::vector<uint16_t>& w) const {
  auto it = nf_cache_.find(w);
  if (it != nf_cache_.end()) return it->second;

  // leftmost-innermost redex, rules tried in declaration order
  size_t pos = 0;
  const RewriteRule* hit = nullptr;
  for (; pos < w.size() && !hit; ++pos) {
    for (const auto& r : rules) {
      if (r.lhs.size() > w.size() - pos) continue;
      if (std::equal(r.lhs.begin(), r.lhs.end(), w.begin() + pos)) {
        hit = &r;
        break;
      }
    }
    if (hit) break;
  }

  AlgElem out(this);
  if (!hit) {
    out.add_term(Monomial(w), Series::one());
  } else {
    if (++nf_steps_ > step_budget) {
      nf_steps_ = 0;
      throw NonTerminating(
          "rewrite step budget exceeded; presentation is not confluent/terminating");
    }
    const int cut = word_cut();
    for (const auto& [m, s] : hit->rhs.terms()) {
      std::vector<uint16_t> w2;
      w2.reserve(w.size() - hit->lhs.size() + m.w.size());
      w2.insert(w2.end(), w.begin(), w.begin() + pos);
      w2.insert(w2.end(), m.w.begin(), m.w.end());
      w2.insert(w2.end(), w.begin() + pos + hit->lhs.size(), w.end());
      if (static_cast<int>(w2.size()) > cut) continue;
      out += nf_word(w2).scaled(s).capped(window.order);
    }
  }
  return nf_cache_.emplace(w, std::move(out)).first->second;
}

AlgElem Presentation::normal_form(const std::vector<uint16_t>& word,
                                  const Series& coeff) const {
  for (uint16_t g : word)
    if (g >= gens.size())
      throw UnknownGenerator("generator id " + std::to_string(g) + " out of range");
  if (static_cast<int>(word.size()) > word_cut()) return AlgElem(this);
  nf_steps_ = 0;
  AlgElem out(this);
  const Series c = coeff.restricted(window);
  if (c.is_zero()) return out;
  for (const auto& [m, s] : nf_word(word).terms()) out.add_term(m, (c * s).restricted(window));
  return out;
}

AlgElem Presentation::mul(const AlgElem& a, const AlgElem& b) const {
  check_same_pres(a.pres(), this);
  check_same_pres(b.pres(), this);
  AlgElem out(this);
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      Series c = (ca * cb).restricted(window);
      if (c.is_zero()) continue;
      std::vector<uint16_t> w = ma.w;
      w.insert(w.end(), mb.w.begin(), mb.w.end());
      out += normal_form(w, c);
    }
  return out;
}

TensorElem Presentation::mul(const TensorElem& a, const TensorElem& b) const {
  if (a.arity() != b.arity()) throw ArityMismatch("tensor arities differ");
  check_same_pres(a.pres(), this);
  check_same_pres(b.pres(), this);
  TensorElem out(this, a.arity());
  for (const auto& [ma, ca] : a.terms())
    for (const auto& [mb, cb] : b.terms()) {
      Series c = (ca * cb).restricted(window);
      if (c.is_zero()) continue;
      // componentwise product, then expand the per-slot normal forms
      std::vector<std::pair<std::vector<Monomial>, Series>> acc;
      acc.push_back({{}, c});
      bool dead = false;
      for (int i = 0; i < a.arity() && !dead; ++i) {
        std::vector<uint16_t> w = ma[i].w;
        w.insert(w.end(), mb[i].w.begin(), mb[i].w.end());
        AlgElem slot = normal_form(w, Series::one());
        if (slot.is_zero()) {
          dead = true;
          break;
        }
        std::vector<std::pair<std::vector<Monomial>, Series>> next;
        for (const auto& [tuple, cc] : acc)
          for (const auto& [m, s] : slot.terms()) {
            Series c2 = (cc * s).restricted(window);
            if (c2.is_zero()) continue;
            auto t2 = tuple;
            t2.push_back(m);
            next.push_back({std::move(t2), c2});
          }
        acc = std::move(next);
        dead = acc.empty();
      }
      if (!dead)
        for (auto& [tuple, cc] : acc) out.add_term(tuple, cc);
    }
  return out;
}

AlgElem elem_mul(const AlgElem& a, const AlgElem& b) {
  if (!a.pres()) throw PresentationMismatch("element without presentation");
  return a.pres()->mul(a, b);
}

TensorElem tensor_mul(const TensorElem& a, const TensorElem& b) {
  if (!a.pres()) throw PresentationMismatch("tensor without presentation");
  return a.pres()->mul(a, b);
}

AlgElem elem_pow(const AlgElem& a, int n) {
  AlgElem r = AlgElem::unit(a.pres());
  for (int i = 0; i < n; ++i) r = elem_mul(r, a);
  return r;
}

// exp/log iterate until the running term dies inside the window; the bound
// certifies valuation/degree growth at truncation.
static int iteration_bound(const Presentation& p) {
  int b = p.window.order + p.window.floor + 4;
  if (p.kind == Kind::Qfsha) b += p.word_cut();
  return b;
}

AlgElem elem_exp(const AlgElem& a) {
  const Presentation& p = *a.pres();
  int bound = iteration_bound(p);
  AlgElem sum = AlgElem::unit(&p);
  AlgElem term = AlgElem::unit(&p);
  for (int k = 1; k <= bound; ++k) {
    term = p.mul(term, a).scaled(Series(Rat(1, k)));
    if (term.is_zero()) return sum;
    sum += term;
  }
  throw NonPositiveValuation("exp argument is not nilpotent inside the window");
}

AlgElem elem_log(const AlgElem& a) {
  const Presentation& p = *a.pres();
  AlgElem u = a - AlgElem::unit(&p);
  int bound = iteration_bound(p);
  AlgElem sum(&p);
  AlgElem pw = AlgElem::unit(&p);
  for (int k = 1; k <= bound; ++k) {
    pw = p.mul(pw, u);
    if (pw.is_zero()) return sum;
    sum += pw.scaled(Series(Rat((k % 2) ? 1 : -1, k)));
  }
  throw NotUnipotent("log argument minus 1 is not nilpotent inside the window");
}

TensorElem tensor_exp(const TensorElem& a) {
  const Presentation& p = *a.pres();
  int bound = iteration_bound(p);
  TensorElem sum = TensorElem::unit(&p, a.arity());
  TensorElem term = sum;
  for (int k = 1; k <= bound; ++k) {
    term = p.mul(term, a).scaled(Series(Rat(1, k)));
    if (term.is_zero()) return sum;
    sum += term;
  }
  throw NonPositiveValuation("tensor exp argument is not nilpotent inside the window");
}

TensorElem tensor_log(const TensorElem& a) {
  const Presentation& p = *a.pres();
  TensorElem u = a - TensorElem::unit(&p, a.arity());
  int bound = iteration_bound(p);
  TensorElem sum(&p, a.arity());
  TensorElem pw = TensorElem::unit(&p, a.arity());
  for (int k = 1; k <= bound; ++k) {
    pw = p.mul(pw, u);
    if (pw.is_zero()) return sum;
    sum += pw.scaled(Series(Rat((k % 2) ? 1 : -1, k)));
  }
  throw NotUnipotent("tensor log argument minus 1 is not nilpotent inside the window");
}

// ------------------------------------------------------------ GenMorphism --

TensorElem GenMorphism::apply(const AlgElem& x) const {
  check_same_pres(x.pres(), src);
  TensorElem out(dst, arity);
  for (const auto& [m, c] : x.terms()) {
    TensorElem prod = TensorElem::unit(dst, arity).scaled(c);
    if (anti) {
      for (auto it = m.w.rbegin(); it != m.w.rend(); ++it)
        prod = dst->mul(prod, images[*it]);
    } else {
      for (uint16_t g : m.w) prod = dst->mul(prod, images[g]);
    }
    out += prod;
  }
  return out;
}

AlgElem GenMorphism::apply1(const AlgElem& x) const {
  if (arity != 1) throw ArityMismatch("apply1 needs an arity-1 morphism");
  return apply(x).slot0();
}

Certificate GenMorphism::respects_rules() const {
  Certificate cert;
  cert.claim = "morphism '" + label + "' respects all rewrite rules";
  cert.tag = "ncalg.rule-respect";
  cert.order = src->window.order;
  cert.degree = src->degree;
  for (size_t i = 0; i < src->rules.size(); ++i) {
    const auto& r = src->rules[i];
    AlgElem lhs(src);
    lhs.add_term(Monomial(r.lhs), Series::one());
    TensorElem a = apply(lhs);
    TensorElem b = apply(r.rhs);
    if (!a.equal_upto(b, src->window.order)) {
      cert.fail("rule " + std::to_string(i) + " (" + word_str(src, r.lhs) + " -> ...)");
      return cert;
    }
  }
  return cert;
}

Series counit_eval(const Presentation& p, const AlgElem& x) {
  check_same_pres(x.pres(), &p);
  Series out;
  for (const auto& [m, c] : x.terms()) {
    Series v = c;
    for (uint16_t g : m.w) {
      v = (v * p.hopf.counit[g]).restricted(p.window);
      if (v.is_zero()) break;
    }
    out += v;
  }
  return out;
}

// ------------------------------------------------------------- confluence --

Certificate Presentation::confluence_certificate() const {
  Certificate cert;
  cert.claim = "rule set of '" + name + "' is locally confluent on all critical pairs";
  cert.tag = "ncalg.confluence";
  cert.order = window.order;
  cert.degree = degree;

  auto reduce_once_then_nf = [&](const std::vector<uint16_t>& w, size_t pos,
                                 const RewriteRule& r) {
    AlgElem out(this);
    for (const auto& [m, s] : r.rhs.terms()) {
      std::vector<uint16_t> w2(w.begin(), w.begin() + pos);
      w2.insert(w2.end(), m.w.begin(), m.w.end());
      w2.insert(w2.end(), w.begin() + pos + r.lhs.size(), w.end());
      out += normal_form(w2, s);
    }
    return out;
  };

  for (const auto& r1 : rules)
    for (const auto& r2 : rules) {
      // overlaps: a suffix of r1.lhs equals a prefix of r2.lhs
      for (size_t len = 1; len < std::min(r1.lhs.size(), r2.lhs.size()) + 1; ++len) {
        if (len == r2.lhs.size() && r1.lhs.size() == r2.lhs.size()) continue;
        if (len > r1.lhs.size() || len > r2.lhs.size()) continue;
        if (!std::equal(r1.lhs.end() - len, r1.lhs.end(), r2.lhs.begin())) continue;
        std::vector<uint16_t> w = r1.lhs;
        w.insert(w.end(), r2.lhs.begin() + len, r2.lhs.end());
        AlgElem a = reduce_once_then_nf(w, 0, r1);
        AlgElem b = reduce_once_then_nf(w, r1.lhs.size() - len, r2);
        if (!a.equal_upto(b, window.order)) {
          cert.fail("overlap of '" + word_str(this, r1.lhs) + "' and '" +
                    word_str(this, r2.lhs) + "' at word '" + word_str(this, w) + "'");
          return cert;
        }
      }
      // containment: r2.lhs inside r1.lhs
      if (r2.lhs.size() < r1.lhs.size()) {
        for (size_t j = 0; j + r2.lhs.size() <= r1.lhs.size(); ++j) {
          if (!std::equal(r2.lhs.begin(), r2.lhs.end(), r1.lhs.begin() + j)) continue;
          AlgElem a = reduce_once_then_nf(r1.lhs, 0, r1);
          AlgElem b = reduce_once_then_nf(r1.lhs, j, r2);
          if (!a.equal_upto(b, window.order)) {
            cert.fail("containment of '" + word_str(this, r2.lhs) + "' in '" +
                      word_str(this, r1.lhs) + "'");
            return cert;
          }
        }
      }
    }
  return cert;
}

// ---------------------------------------------------------------- parsing --

namespace {

struct Lexer {
  const std::string& s;
  size_t i = 0;
  void skip() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip();
    return i >= s.size();
  }
  char peek() {
    skip();
    return i < s.size() ? s[i] : '\0';
  }
  bool accept(char c) {
    if (peek() == c) {
      ++i;
      return true;
    }
    return false;
  }
  [[noreturn]] void err(const std::string& msg) {
    throw ConfigParseError(msg + " at column " + std::to_string(i + 1) + " in '" + s + "'");
  }
  std::string number() {
    skip();
    size_t b = i;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == b) err("expected number");
    return s.substr(b, i - b);
  }
  std::string ident() {
    skip();
    size_t b = i;
    while (i < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' || s[i] == '\''))
      ++i;
    if (i == b) err("expected identifier");
    return s.substr(b, i - b);
  }
};

class ElemParser {
 public:
  ElemParser(const Presentation& p, const std::string& text) : p_(p), lx_{text} {}

  AlgElem parse() {
    AlgElem e = expr();
    if (!lx_.eof()) lx_.err("trailing input");
    return e;
  }

 private:
  const Presentation& p_;
  Lexer lx_;

  AlgElem expr() {
    AlgElem acc(&p_);
    bool neg = lx_.accept('-');
    acc += signed_term(neg);
    while (!lx_.eof()) {
      if (lx_.accept('+'))
        acc += signed_term(false);
      else if (lx_.accept('-'))
        acc += signed_term(true);
      else
        break;
    }
    return acc;
  }

  AlgElem signed_term(bool neg) {
    AlgElem t = term();
    return neg ? -t : t;
  }

  AlgElem term() {
    AlgElem acc = factor();
    while (lx_.accept('*')) acc = p_.mul(acc, factor());
    return acc;
  }

  AlgElem factor() {
    if (lx_.accept('(')) {
      AlgElem e = expr();
      if (!lx_.accept(')')) lx_.err("expected ')'");
      return maybe_pow(e);
    }
    char c = lx_.peek();
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::string num = lx_.number();
      Rat r = rat_from_string(num);
      if (lx_.accept('/')) r /= rat_from_string(lx_.number());
      r.canonicalize();
      return AlgElem::scalar(&p_, Series(r));
    }
    std::string id = lx_.ident();
    if (id == "h") {
      int e = 1;
      if (lx_.accept('^')) e = std::stoi(lx_.number());
      return AlgElem::scalar(&p_, Series::monomial(Rat(1), e));
    }
    AlgElem g = AlgElem::gen(&p_, p_.gen_id(id));
    return maybe_pow(g);
  }

  AlgElem maybe_pow(const AlgElem& e) {
    if (lx_.accept('^')) {
      int n = std::stoi(lx_.number());
      if (n < 0) lx_.err("negative powers only for h");
      return elem_pow(e, n);
    }
    return e;
  }
};

}  // namespace

AlgElem Presentation::parse(const std::string& text) const {
  return ElemParser(*this, text).parse();
}

}  // namespace qg
