#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qg/errors.hpp"
#include "qg/series.hpp"

using namespace qg;

static Series H(const Rat& c, int e) { return Series::monomial(c, e); }

TEST_CASE("ring basics") {
  Window w{6, 4};
  Series one = Series::one();
  Series h = H(1, 1);

  // (1+h)(1-h) = 1-h^2
  Series p = series_mul(one + h, one - h, w);
  CHECK(p == one - H(1, 2));

  // h^-1 * h^2 = h
  CHECK(series_mul(H(1, -1), H(1, 2), w) == h);

  SUBCASE("underflow") {
    Window w0{6, 0};
    CHECK_THROWS_AS(series_mul(H(1, -1), H(1, -1), Window{6, 1}), ValuationUnderflow);
    CHECK_THROWS_AS(series_div(Series::one(), h, w0), ValuationUnderflow);
  }
}

TEST_CASE("taylor oracle: (e^h - e^-h)(e^h + e^-h) = 2 sinh 2h") {
  Window w{8, 0};
  Series h = H(1, 1);
  Series ep = series_exp(h, w), em = series_exp(-h, w);
  Series prod = series_mul(ep - em, ep + em, w);

  // independent oracle: 2*sinh(2h) = sum 2*(2h)^(2k+1)/(2k+1)!
  Series oracle;
  Rat fact(1);
  for (int k = 1; k <= 9; ++k) {
    fact *= k;
    if (k % 2 == 1) oracle += H(Rat(2) * Rat(1 << k) / fact, k);
  }
  CHECK(prod.equal_upto(oracle, 8));
  CHECK(prod.coeff(1) == 4);
  CHECK(prod.coeff(3) == Rat(8, 3));
}

TEST_CASE("exp/log") {
  Window w{4, 0};
  Series h = H(1, 1);
  CHECK(series_exp(Series(), w) == Series::one());

  Series e = series_exp(h, w);
  CHECK(e.coeff(0) == 1);
  CHECK(e.coeff(2) == Rat(1, 2));
  CHECK(e.coeff(3) == Rat(1, 6));
  CHECK(e.coeff(4) == Rat(1, 24));

  CHECK_THROWS_AS(series_exp(Series::one() + h, w), NonPositiveValuation);

  CHECK(series_log(Series::one(), w).is_zero());
  CHECK(series_log(e, w).equal_upto(h, 4));
  CHECK(series_log(series_mul(e, e, w), w).equal_upto(H(2, 1), 4));
  CHECK_THROWS_AS(series_log(H(2, 0), w), NotUnipotent);

  // exp(a) * exp(-a) = 1 on a random-ish window
  Series a = h + H(Rat(3, 7), 2) + H(Rat(-5, 2), 3);
  Series prod = series_mul(series_exp(a, w), series_exp(-a, w), w);
  CHECK(prod.equal_upto(Series::one(), 4));
}

TEST_CASE("division") {
  Window w{6, 4};
  Series h = H(1, 1);
  Series q = series_exp(h, w), qi = series_exp(-h, w);

  // (q - q^-1) / 2h = 1 + h^2/6 + h^4/120  (Taylor of sinh(h)/h)
  Series r = series_div(q - qi, H(2, 1), w);
  CHECK(r.coeff(0) == 1);
  CHECK(r.coeff(2) == Rat(1, 6));
  CHECK(r.coeff(4) == Rat(1, 120));
  CHECK(r.coeff(1) == 0);

  CHECK(series_div(H(1, 2), h, w) == h);
  CHECK_THROWS_AS(series_div(h, Series(), w), DivisionByZeroSeries);

  // valuation respects multiplication
  Series a = H(Rat(2, 3), 1) + H(1, 3);
  Series b = H(5, 2) + H(1, 4);
  CHECK(*series_mul(a, b, w).valuation() == *a.valuation() + *b.valuation());
}

TEST_CASE("valuation and text form") {
  CHECK(!Series().valuation());
  CHECK(*H(1, -2).valuation() == -2);
  Series s = H(Rat(-1, 2), -1) + Series::one() + H(Rat(3), 2);
  CHECK(s.str() == "-1/2*h^-1 + 1 + 3*h^2");
  CHECK(Series().str() == "0");
}
