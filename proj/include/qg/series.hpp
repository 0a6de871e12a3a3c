#pragma once

#include <gmpxx.h>

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace qg {

using Rat = mpq_class;

/// Truncation window: coefficients are tracked for exponents in [-floor, order].
struct Window {
  int order = 6;  // N: highest tracked power of h
  int floor = 4;  // V: lowest tracked power is -V

  int lo() const { return -floor; }
};

/// Exact Laurent series in the formal parameter h, truncated above.
///
/// Invariants: coefficients below `lo()` are exactly zero (low-end truncation
/// is an error, never silent); coefficients above `hi()` are unknown.  A value
/// with hi() == kExact is exact at every order (e.g. a plain rational).
class Series {
 public:
  static constexpr int kExact = 1 << 24;

  Series() : lo_(0), hi_(kExact) {}
  Series(const Rat& c, int hi = kExact);          // constant
  static Series monomial(const Rat& c, int exp, int hi = kExact);
  static Series zero() { return Series(); }
  static Series one() { return Series(Rat(1)); }

  bool is_zero() const { return c_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return hi_; }
  /// Least exponent with nonzero coefficient; empty for the zero series.
  std::optional<int> valuation() const;
  Rat coeff(int exp) const;

  Series operator-() const;
  Series& operator+=(const Series& o);
  Series& operator-=(const Series& o);
  friend Series operator+(Series a, const Series& b) { return a += b; }
  friend Series operator-(Series a, const Series& b) { return a -= b; }
  friend Series operator*(const Series& a, const Series& b);
  Series& operator*=(const Series& o) { return *this = *this * o; }

  /// Multiply by a single Laurent monomial c*h^exp.
  Series shifted(int exp) const;
  Series scaled(const Rat& c) const;

  /// Clamp to a window: drops (unknown) data above w.order, raises
  /// ValuationUnderflow if a nonzero coefficient lies below -w.floor.
  Series restricted(const Window& w) const;
  /// Forget accuracy above `order` without the low check.
  Series capped(int order) const;

  /// Coefficientwise equality on the jointly known range [min lo, min(hi, order)].
  bool equal_upto(const Series& o, int order) const;
  bool operator==(const Series& o) const { return equal_upto(o, kExact); }

  std::string str() const;  // "c_v*h^v + ... + c_N*h^N"

 private:
  int lo_;              // exponent of c_[0]
  int hi_;              // accuracy ceiling (inclusive)
  std::vector<Rat> c_;  // contiguous from lo_, trimmed at both ends
  void trim();
  friend Series series_mul(const Series&, const Series&, const Window&);
};

// -- windowed scalar operations ---------------------------------------------

/// Convolution product clamped to the window.
Series series_mul(const Series& a, const Series& b, const Window& w);

/// exp(a) for valuation(a) >= 1.
Series series_exp(const Series& a, const Window& w);

/// log(a) for a == 1 (mod h).
Series series_log(const Series& a, const Window& w);

/// Exact quotient; requires valuation(b) finite.
Series series_div(const Series& a, const Series& b, const Window& w);

/// Multiplicative inverse, i.e. series_div(1, b).
Series series_inv(const Series& b, const Window& w);

Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& r);

}  // namespace qg
