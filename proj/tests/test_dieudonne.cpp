#include <sslocus/dieudonne.hpp>

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>

using sslocus::Rational;
using namespace sslocus::dieudonne;

namespace {

// Leibniz expansion; fine for n <= 5.
WittScalar det_leibniz(const WittRing& R, const WMatrix& A) {
  const std::size_t n = A.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  WittScalar total = R.zero();
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) inversions += perm[i] > perm[j];
    WittScalar term = R.one();
    for (std::size_t i = 0; i < n; ++i) term = R.mul(term, A[i][perm[i]]);
    total = inversions % 2 ? R.sub(total, term) : R.add(total, term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

WMatrix random_matrix(const WittRing& R, std::size_t n, std::mt19937_64& rng) {
  WMatrix A(n, WVector(n));
  for (auto& row : A)
    for (auto& x : row) x = R.random(rng);
  return A;
}

}  // namespace

TEST(Witt, RingAxiomsAndFrobenius) {
  std::mt19937_64 rng(1);
  for (auto [p, m, N] : std::vector<std::tuple<std::uint32_t, unsigned, unsigned>>{{2, 4, 12}, {3, 2, 8}, {5, 3, 6}, {2, 1, 10}}) {
    WittRing R(p, m, N);
    EXPECT_TRUE(R.is_zero(R.modulus_at(R.sigma_of_x())));
    for (int t = 0; t < 100; ++t) {
      WittScalar a = R.random(rng), b = R.random(rng), c = R.random(rng);
      ASSERT_EQ(R.mul(a, R.add(b, c)), R.add(R.mul(a, b), R.mul(a, c)));
      ASSERT_EQ(R.mul(R.mul(a, b), c), R.mul(a, R.mul(b, c)));
      ASSERT_EQ(R.sigma(R.mul(a, b)), R.mul(R.sigma(a), R.sigma(b)));
      ASSERT_EQ(R.sigma(a, m), a);
      // sigma lifts the residue Frobenius
      ASSERT_EQ(R.residue(R.sigma(a)), R.residue_field().frob(R.residue(a)));
      if (R.is_unit(a)) {
        ASSERT_EQ(R.mul(a, R.inv(a)), R.one());
      }
    }
  }
}

TEST(Witt, Valuation) {
  WittRing R(3, 2, 6);
  EXPECT_EQ(R.valuation(R.zero()), 6u);
  EXPECT_EQ(R.valuation(R.from_int(18)), 2u);
  EXPECT_EQ(R.valuation(R.p_power_times(R.x(), 4)), 4u);
  EXPECT_EQ(R.divide_p_power(R.from_int(18), 2), R.from_int(2));
  EXPECT_THROW(R.inv(R.from_int(3)), std::domain_error);
}

TEST(Witt, PrecisionLimit) { EXPECT_THROW(WittRing(2, 4, 63), std::invalid_argument); }

TEST(Charpoly, MatchesLeibnizDeterminant) {
  std::mt19937_64 rng(2);
  WittRing R(2, 4, 10);
  for (std::size_t n = 1; n <= 5; ++n) {
    WMatrix A = random_matrix(R, n, rng);
    WVector c = charpoly(R, A);
    ASSERT_EQ(c.size(), n + 1);
    // det(tI - A) at several t equals sum c_j t^{n-j}
    for (long t : {0L, 1L, 3L, -2L}) {
      WMatrix M = A;
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) M[i][j] = R.sub(i == j ? R.from_int(t) : R.zero(), A[i][j]);
      WittScalar val = R.zero();
      for (std::size_t j = 0; j <= n; ++j) val = R.add(R.mul(val, R.from_int(t)), c[j]);
      EXPECT_EQ(val, det_leibniz(R, M)) << "n=" << n << " t=" << t;
    }
  }
}

TEST(Charpoly, CayleyHamiltonOnFrobeniusPower) {
  for (int g = 1; g <= 4; ++g) {
    WittRing R(2, 4, default_precision(g));
    GammaForm G = random_gamma(R, g, 100 + static_cast<std::uint64_t>(g), false);
    WMatrix Phi = iterate_semilinear(R, f_matrix(R, G), R.m());
    WVector c = charpoly(R, Phi);
    WMatrix acc = zero_matrix(R, Phi.size());
    for (const auto& cj : c) {
      acc = matmul(R, acc, Phi);
      for (std::size_t i = 0; i < Phi.size(); ++i) acc[i][i] = R.add(acc[i][i], cj);
    }
    EXPECT_EQ(valuation(R, acc), R.N());
  }
}

TEST(NormalForm, SymplecticAndShape) {
  for (int g = 1; g <= 4; ++g) {
    WittRing R(2, 4, default_precision(g));
    for (std::uint64_t s = 0; s < 10; ++s)
      for (bool ss : {false, true}) {
        GammaForm G = random_gamma(R, g, s, ss);
        EXPECT_TRUE(is_symplectic(R, G, R.N()));
        EXPECT_EQ(G.at(1, 2 * g), R.neg(R.one()));
        EXPECT_EQ(G.at(g + 1, g), R.one());
      }
  }
  WittRing R(2, 4, 10);
  EXPECT_THROW(random_gamma(R, 5, 0, false), std::invalid_argument);
  EXPECT_THROW(random_gamma(R, 0, 0, false), std::invalid_argument);
}

TEST(NormalForm, SeedDeterminism) {
  WittRing R(2, 4, 10);
  EXPECT_EQ(random_gamma(R, 3, 9, false).gamma, random_gamma(R, 3, 9, false).gamma);
  EXPECT_NE(random_gamma(R, 3, 9, false).gamma, random_gamma(R, 3, 10, false).gamma);
}

TEST(NormalForm, HodgeTypeOfFrobenius) {
  // F = gamma * diag(1..1, p..p) with gamma invertible
  for (int g = 1; g <= 4; ++g) {
    WittRing R(3, 2, default_precision(g));
    auto ed = elementary_divisor_valuations(R, f_matrix(R, random_gamma(R, g, 5, false)));
    std::vector<unsigned> want(static_cast<std::size_t>(g), 0);
    want.insert(want.end(), static_cast<std::size_t>(g), 1);
    EXPECT_EQ(ed, want);
  }
}

TEST(Criterion, IndexSetAndCounts) {
  EXPECT_TRUE(criterion_index_set(2).empty());
  EXPECT_EQ(criterion_index_set(3), (std::vector<std::pair<int, int>>{{2, 4}}));
  std::vector<int> counts;
  for (int g = 2; g <= 6; ++g) counts.push_back(criterion_condition_count(g));
  // g(g-1)/2 - floor(g^2/4)
  EXPECT_EQ(counts, (std::vector<int>{0, 1, 2, 4, 6}));
  for (int g = 2; g <= 6; ++g) EXPECT_EQ(criterion_condition_count(g), g * (g - 1) / 2 - g * g / 4);
}

TEST(Criterion, PatternSamplesSatisfyIt) {
  WittRing R(2, 4, 10);
  for (std::uint64_t s = 0; s < 20; ++s) EXPECT_TRUE(ss_criterion_check(R, random_gamma(R, 3, s, true)));
}

TEST(Eq4, HoldsOnSamples) {
  for (int g = 1; g <= 4; ++g)
    for (std::uint32_t p : {2u, 3u}) {
      WittRing R(p, p == 2 ? 4 : 2, default_precision(g));
      for (std::uint64_t s = 0; s < 10; ++s) {
        auto res = verify_eq4(R, random_gamma(R, g, s, s % 2 == 0));
        EXPECT_TRUE(res.pass);
        EXPECT_GE(res.residual_valuation, R.N() - static_cast<unsigned>(2 * g));
      }
    }
}

TEST(Eq4, DetectsBrokenShape) {
  WittRing R(2, 4, 10);
  GammaForm G = random_gamma(R, 3, 1, false);
  // a unit below the subdiagonal of a: F e1 = e2 + e3
  G.gamma[2][0] = R.one();
  auto res = verify_eq4(R, G);
  EXPECT_FALSE(res.pass);
  EXPECT_LT(res.residual_valuation, res.required);
}

TEST(Slopes, HullBasics) {
  Hull h = lower_hull({{0, 0}, {1, 5}, {2, 1}, {4, 3}});
  ASSERT_EQ(h.pts.size(), 3u);
  EXPECT_EQ(h.at(1), Rational(1, 2));
  EXPECT_EQ(h.at(3), Rational(2));
  // collinear middle vertices are dropped
  EXPECT_EQ(lower_hull({{0, 0}, {2, 1}, {4, 2}}).pts.size(), 2u);
}

TEST(Slopes, LowGenusAlwaysSupersingular) {
  for (int g : {1, 2}) {
    auto s = run_trials(g, 2, 4, default_precision(g), 20, 1, false);
    for (const auto& t : s.trials) EXPECT_TRUE(t.slopes.all_half()) << t.slopes.to_string();
  }
}

TEST(Slopes, PatternImpliesSupersingular) {
  for (int g : {3, 4}) {
    auto s = run_trials(g, 2, 4, default_precision(g), 50, 1, true);
    for (const auto& t : s.trials) {
      EXPECT_TRUE(t.criterion);
      EXPECT_TRUE(t.slopes.all_half()) << t.slopes.to_string();
    }
    EXPECT_TRUE(s.implication_holds());
  }
  auto s3 = run_trials(3, 3, 2, 10, 20, 1, true);
  for (const auto& t : s3.trials) EXPECT_TRUE(t.slopes.all_half());
}

TEST(Slopes, GenericRejectionRateLargeSample) {
  // one residue condition over F_16 at g = 3: the expected rate is 15/16
  auto s = run_trials(3, 2, 4, 10, 1000, 5000, false);
  EXPECT_EQ(s.inconclusive(), 0u);
  EXPECT_GE(s.rejected(), 900u);
  EXPECT_TRUE(s.implication_holds());
}

TEST(Slopes, SymmetricAndIntegralEndpoints) {
  auto s = run_trials(4, 2, 4, 12, 30, 77, false);
  for (const auto& t : s.trials) {
    ASSERT_EQ(t.slopes.status, SlopeStatus::conclusive);
    EXPECT_TRUE(t.slopes.symmetric());
    EXPECT_EQ(t.slopes.total(), Rational(4));
  }
}

TEST(Slopes, HodgeBelowNewton) {
  for (int g = 2; g <= 4; ++g) {
    WittRing R(2, 4, default_precision(g));
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      GammaForm G = random_gamma(R, g, seed, seed % 2 == 1);
      auto prof = newton_slopes(R, G);
      ASSERT_EQ(prof.status, SlopeStatus::conclusive);
      auto hodge = elementary_divisor_valuations(R, iterate_semilinear(R, f_matrix(R, G), R.m()));
      Rational hs = 0, ns = 0;
      for (std::size_t j = 0; j < hodge.size(); ++j) {
        hs += hodge[j];
        ns += prof.slopes[j] * static_cast<long>(R.m());
        // valuations at full precision only bound the true value from below
        if (hodge[j] < R.N()) {
          EXPECT_LE(hs, ns) << "g=" << g << " seed=" << seed << " j=" << j;
        }
      }
    }
  }
}

TEST(Slopes, InsufficientPrecisionIsInconclusive) {
  WittRing R(2, 4, 12);
  GammaForm G = random_gamma(R, 4, 3, false);
  auto prof = newton_slopes(R, G, 1, 11);
  EXPECT_EQ(prof.status, SlopeStatus::inconclusive);
  EXPECT_EQ(prof.to_string(), "inconclusive");
}
