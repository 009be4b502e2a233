#include <sslocus/exactpoly.hpp>

#include <gtest/gtest.h>

#include <random>
#include <vector>

using sslocus::FactoredPPoly;
using sslocus::PPoly;
using sslocus::RatFn;
using sslocus::Rational;

namespace {

const PPoly P = PPoly::p();

PPoly random_poly(std::mt19937_64& rng, int deg) {
  PPoly r;
  for (int k = 0; k <= deg; ++k) {
    Rational c(static_cast<long>(rng() % 11) - 5, static_cast<long>(rng() % 4) + 1);
    c.canonicalize();
    r = r + PPoly::monomial(c, static_cast<unsigned>(k));
  }
  return r;
}

// Akiyama-Tanigawa; yields B_1 = +1/2, which does not matter for even n.
std::vector<Rational> akiyama_tanigawa(unsigned n) {
  std::vector<Rational> a(n + 1), out;
  for (unsigned m = 0; m <= n; ++m) {
    a[m] = Rational(1, m + 1);
    for (unsigned j = m; j >= 1; --j) a[j - 1] = j * (a[j - 1] - a[j]);
    out.push_back(a[0]);
  }
  return out;
}

}  // namespace

TEST(PPolyArithmetic, DifferenceOfSquares) {
  EXPECT_EQ((P + PPoly(1)) * (P - PPoly(1)), P * P - PPoly(1));
  EXPECT_EQ(PPoly::p_power_plus(3, -1), P.pow(3) - PPoly(1));
  EXPECT_EQ((P * P - PPoly(1)).degree(), 2);
  EXPECT_TRUE(PPoly().is_zero());
}

TEST(PPolyArithmetic, EvaluationMatchesHorner) {
  PPoly f = P.pow(4) - PPoly(3) * P + PPoly(Rational(1, 2));
  EXPECT_EQ(f(Rational(2)), Rational(16 - 6) + Rational(1, 2));
  EXPECT_EQ(f(Rational(-1, 2)), Rational(1, 16) + Rational(3, 2) + Rational(1, 2));
}

TEST(PPolyArithmetic, DivmodReconstructs) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 40; ++t) {
    PPoly a = random_poly(rng, 7), b = random_poly(rng, 3);
    if (b.is_zero()) continue;
    auto [q, r] = sslocus::divmod(a, b);
    EXPECT_EQ(q * b + r, a);
    EXPECT_TRUE(r.is_zero() || r.degree() < b.degree());
  }
}

TEST(PPolyArithmetic, GcdOfCyclotomicProducts) {
  EXPECT_EQ(sslocus::gcd(P.pow(6) - PPoly(1), P.pow(4) - PPoly(1)), P * P - PPoly(1));
  EXPECT_EQ(sslocus::gcd(P.pow(3) - PPoly(1), P.pow(2) + PPoly(1)), PPoly(1));
}

TEST(PPolyArithmetic, ToString) {
  EXPECT_EQ((P * P - PPoly(2) * P + PPoly(1)).to_string(), "p^2 - 2*p + 1");
  EXPECT_EQ(PPoly().to_string(), "0");
}

TEST(RatFnTest, CanonicalFormCancels) {
  RatFn r(P * P - PPoly(1), P - PPoly(1));
  EXPECT_TRUE(r.is_polynomial());
  EXPECT_EQ(r, RatFn(P + PPoly(1)));
  RatFn s(PPoly(2) * P, PPoly(4) * P * P);
  EXPECT_EQ(s, RatFn(PPoly(Rational(1, 2)), P));
  EXPECT_EQ(s.den(), P);
}

TEST(RatFnTest, FieldOperations) {
  RatFn a(P + PPoly(1), P - PPoly(1));
  RatFn b(P, P * P + PPoly(1));
  EXPECT_EQ(a * a.inverse(), RatFn(1));
  EXPECT_EQ((a + b) - b, a);
  EXPECT_EQ((a / b) * b, a);
  EXPECT_EQ(a(Rational(3)), Rational(2));
}

TEST(RatFnTest, PoleThrows) {
  RatFn a(PPoly(1), P - PPoly(2));
  EXPECT_ANY_THROW(a(Rational(2)));
  EXPECT_ANY_THROW(RatFn().inverse());
}

TEST(FactoredPPolyTest, ExpandMatchesProduct) {
  FactoredPPoly f(Rational(3));
  f.times(P - PPoly(1), 2).times(P.pow(3) + PPoly(1));
  EXPECT_EQ(f.expand(), PPoly(3) * (P - PPoly(1)).pow(2) * (P.pow(3) + PPoly(1)));
  EXPECT_EQ(f(Rational(2)), Rational(3 * 1 * 9));
  EXPECT_EQ(f.to_string(), "3*(p - 1)^2*(p^3 + 1)");
}

TEST(Bernoulli, MatchesAkiyamaTanigawa) {
  auto oracle = akiyama_tanigawa(24);
  for (unsigned n = 2; n <= 24; n += 2) EXPECT_EQ(sslocus::bernoulli(n), oracle[n]) << "n=" << n;
}

TEST(Bernoulli, KnownValues) {
  EXPECT_EQ(sslocus::bernoulli(2), Rational(1, 6));
  EXPECT_EQ(sslocus::bernoulli(12), Rational(-691, 2730));
}

TEST(Bernoulli, OddOrNonpositiveRejected) {
  EXPECT_THROW(sslocus::bernoulli(3), std::invalid_argument);
  EXPECT_THROW(sslocus::bernoulli(0), std::invalid_argument);
}

TEST(Zeta, NegativeOddIntegers) {
  EXPECT_EQ(sslocus::zeta_neg(1), Rational(-1, 12));
  EXPECT_EQ(sslocus::zeta_neg(2), Rational(1, 120));
  EXPECT_EQ(sslocus::zeta_neg(3), Rational(-1, 252));
}

TEST(Proportionality, ReferenceTable) {
  const std::vector<Rational> table{Rational(1), Rational(1, 24), Rational(1, 5760), Rational(1, 2903040),
                                    Rational(1, 1393459200)};
  for (unsigned g = 0; g < table.size(); ++g) EXPECT_EQ(sslocus::proportionality_v(g), table[g]) << "g=" << g;
}

TEST(Binomial, PascalRow) {
  for (unsigned n = 1; n < 12; ++n)
    for (unsigned k = 1; k < n; ++k)
      EXPECT_EQ(sslocus::binomial(n, k), sslocus::binomial(n - 1, k - 1) + sslocus::binomial(n - 1, k));
}
