#include "qg/series.hpp"

#include <algorithm>
#include <sstream>

#include "qg/errors.hpp"

namespace qg {

static int add_hi(int hi, int d) {
  if (hi >= Series::kExact) return Series::kExact;
  return hi + d;
}

Series::Series(const Rat& c, int hi) : lo_(0), hi_(hi) {
  if (c != 0) c_.push_back(c);
}

Series Series::monomial(const Rat& c, int exp, int hi) {
  Series s;
  s.hi_ = hi;
  if (c != 0 && exp <= hi) {
    s.lo_ = exp;
    s.c_.push_back(c);
  }
  return s;
}

void Series::trim() {
  size_t b = 0;
  while (b < c_.size() && c_[b] == 0) ++b;
  if (b > 0) {
    c_.erase(c_.begin(), c_.begin() + b);
    lo_ += static_cast<int>(b);
  }
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
  if (c_.empty()) lo_ = 0;
}

std::optional<int> Series::valuation() const {
  if (c_.empty()) return std::nullopt;
  return lo_;
}

Rat Series::coeff(int exp) const {
  if (exp < lo_ || exp >= lo_ + static_cast<int>(c_.size())) return Rat(0);
  return c_[exp - lo_];
}

Series Series::operator-() const {
  Series r = *this;
  for (auto& c : r.c_) c = -c;
  return r;
}

Series& Series::operator+=(const Series& o) {
  if (o.c_.empty()) {
    hi_ = std::min(hi_, o.hi_);
    return *this;
  }
  int nlo = c_.empty() ? o.lo_ : std::min(lo_, o.lo_);
  int nhi = std::min(hi_, o.hi_);
  int top = std::max(c_.empty() ? nlo - 1 : lo_ + static_cast<int>(c_.size()) - 1,
                     o.lo_ + static_cast<int>(o.c_.size()) - 1);
  top = std::min(top, nhi);
  std::vector<Rat> out(top >= nlo ? top - nlo + 1 : 0, Rat(0));
  for (size_t i = 0; i < c_.size(); ++i) {
    int e = lo_ + static_cast<int>(i);
    if (e <= top) out[e - nlo] += c_[i];
  }
  for (size_t i = 0; i < o.c_.size(); ++i) {
    int e = o.lo_ + static_cast<int>(i);
    if (e <= top) out[e - nlo] += o.c_[i];
  }
  lo_ = nlo;
  hi_ = nhi;
  c_ = std::move(out);
  trim();
  return *this;
}

Series& Series::operator-=(const Series& o) { return *this += -o; }

Series operator*(const Series& a, const Series& b) {
  Series r;
  if (a.c_.empty() || b.c_.empty()) {
    // 0 * x is exactly 0 whatever the accuracy of x.
    r.hi_ = Series::kExact;
    return r;
  }
  r.lo_ = a.lo_ + b.lo_;
  r.hi_ = std::min(add_hi(a.hi_, b.lo_), add_hi(b.hi_, a.lo_));
  int top = std::min(r.lo_ + static_cast<int>(a.c_.size() + b.c_.size()) - 2, r.hi_);
  if (top < r.lo_) return Series();
  r.c_.assign(top - r.lo_ + 1, Rat(0));
  for (size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (size_t j = 0; j < b.c_.size(); ++j) {
      int e = a.lo_ + static_cast<int>(i) + b.lo_ + static_cast<int>(j);
      if (e > top) break;
      if (b.c_[j] != 0) r.c_[e - r.lo_] += a.c_[i] * b.c_[j];
    }
  }
  r.trim();
  return r;
}

Series Series::shifted(int exp) const {
  Series r = *this;
  r.lo_ += exp;
  r.hi_ = add_hi(r.hi_, exp);
  return r;
}

Series Series::scaled(const Rat& c) const {
  if (c == 0) return Series();
  Series r = *this;
  for (auto& x : r.c_) x *= c;
  return r;
}

Series Series::restricted(const Window& w) const {
  if (!c_.empty() && lo_ < w.lo())
    throw ValuationUnderflow("coefficient at h^" + std::to_string(lo_) +
                             " falls below the window floor h^" + std::to_string(w.lo()));
  return capped(w.order);
}

Series Series::capped(int order) const {
  Series r = *this;
  r.hi_ = std::min(r.hi_, order);
  int top = r.lo_ + static_cast<int>(r.c_.size()) - 1;
  if (top > r.hi_) {
    int drop = top - r.hi_;
    r.c_.resize(r.c_.size() >= static_cast<size_t>(drop) ? r.c_.size() - drop : 0);
  }
  r.trim();
  return r;
}

bool Series::equal_upto(const Series& o, int order) const {
  int top = std::min({hi_, o.hi_, order});
  int bot = std::min(c_.empty() ? top : lo_, o.c_.empty() ? top : o.lo_);
  for (int e = bot; e <= top; ++e)
    if (coeff(e) != o.coeff(e)) return false;
  return true;
}

std::string Series::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < c_.size(); ++i) {
    const Rat& c = c_[i];
    if (c == 0) continue;
    int e = lo_ + static_cast<int>(i);
    Rat a = c;
    if (!first)
      os << (c < 0 ? " - " : " + ");
    else if (c < 0)
      os << "-";
    if (a < 0) a = -a;
    if (e == 0)
      os << a.get_str();
    else {
      if (a != 1) os << a.get_str() << "*";
      os << "h";
      if (e != 1) os << "^" << e;
    }
    first = false;
  }
  return os.str();
}

Series series_mul(const Series& a, const Series& b, const Window& w) {
  return (a * b).restricted(w);
}

Series series_exp(const Series& a, const Window& w) {
  auto v = a.valuation();
  if (v && *v <= 0)
    throw NonPositiveValuation("exp needs valuation >= 1, got " + std::to_string(*v));
  int cap = std::min(a.hi(), w.order);
  Series sum = Series::one();
  Series term = Series::one();
  for (int k = 1; k <= cap + 1; ++k) {
    term = (term * a).capped(cap).scaled(Rat(1, k));  // a^k/k!
    if (term.is_zero()) break;
    sum += term;
  }
  return sum.restricted(w).capped(cap);
}

Series series_log(const Series& a, const Window& w) {
  Series u = a - Series::one();
  auto v = u.valuation();
  if (v && *v <= 0)
    throw NotUnipotent("log needs a == 1 (mod h), difference has valuation " +
                       std::to_string(*v));
  int cap = std::min(a.hi(), w.order);
  Series sum;
  Series pw = Series::one();
  for (int k = 1; k <= cap + 1; ++k) {
    pw = (pw * u).capped(cap);
    if (pw.is_zero()) break;
    sum += pw.scaled(Rat((k % 2) ? 1 : -1, k));
  }
  return sum.restricted(w).capped(cap);
}

Series series_inv(const Series& b, const Window& w) {
  return series_div(Series::one(), b, w);
}

Series series_div(const Series& a, const Series& b, const Window& w) {
  auto vb = b.valuation();
  if (!vb) throw DivisionByZeroSeries("divisor is zero to all tracked orders");
  // b = h^v * u with u a unit; invert u by the standard recurrence.
  Series u = b.shifted(-*vb);
  int cap = std::min({u.hi(), w.order + w.floor});
  std::vector<Rat> inv(static_cast<size_t>(std::max(cap, 0)) + 1, Rat(0));
  Rat u0 = u.coeff(0);
  inv[0] = 1 / u0;
  for (int k = 1; k <= cap; ++k) {
    Rat s(0);
    for (int j = 0; j < k; ++j) s += inv[j] * u.coeff(k - j);
    inv[k] = -s / u0;
  }
  Series uinv;
  for (int k = 0; k <= cap; ++k) uinv += Series::monomial(inv[k], k, cap);
  uinv = uinv.capped(cap);
  return (a * uinv).shifted(-*vb).restricted(w);
}

Rat rat_from_string(const std::string& s) {
  Rat r;
  if (r.set_str(s, 10) != 0) throw ConfigParseError("bad rational literal '" + s + "'");
  r.canonicalize();
  return r;
}

std::string rat_to_string(const Rat& r) { return r.get_str(); }

}  // namespace qg
