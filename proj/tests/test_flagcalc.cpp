#include <sslocus/flagcalc.hpp>

#include <gtest/gtest.h>

using sslocus::PPoly;
using sslocus::RatFn;
using sslocus::Rational;
using namespace sslocus::flagcalc;

namespace {

const PPoly P = PPoly::p();
RatFn rp(const PPoly& x) { return RatFn(x); }
const RatFn p = pp();
const RatFn one(1);

// Reference relations, multiplied by l0, on (l0^3 l1, l0^3 l2, l0 l1^3, l0 l1^2 l2, l0 l1 l2^2).
std::vector<RatFn> reference_lambda4() {
  return {p, -(p * p + one), p, -(p - one) * (p - one), -(RatFn(2) * p * p - p + RatFn(2))};
}
std::vector<RatFn> reference_second() {
  return {RatFn(2), -(p - one), RatFn(0), p - one, RatFn(-2) * (p * p - p + one)};
}
std::vector<RatFn> reference_third() { return {RatFn(0), p, RatFn(0), -p, RatFn(2) * (p * p - p + one)}; }

std::vector<RatFn> reference_solution() {
  RatFn b = p * (p * p + one), q = p * p - p + one;
  return {b * q, -(b * q), -(b * (p - one) * (p - one)), b * q, b * p};
}

bool nonzero_multiple(const std::vector<RatFn>& a, const std::vector<RatFn>& b) {
  auto r = proportionality(a, b);
  return r && !r->is_zero();
}

}  // namespace

TEST(Chern, C2IsDerivedFromLambdaRelation) {
  EllClass c2 = derive_c2_g4();
  EllClass expect = gen4(L0, RatFn(Rational(1, 2))) * gen4(L0) + gen4(L1, RatFn(Rational(1, 2))) * gen4(L1) -
                    gen4(L2, RatFn(Rational(1, 2))) * gen4(L2);
  EXPECT_EQ(c2.to_string(), expect.to_string());
  EllClass l1 = lambda_g4(1);
  EXPECT_EQ(l1.to_string(), (gen4(L0, p - one) + gen4(L1, p - one) + gen4(L2, p - one)).to_string());
  // lambda1^2 = 2 lambda2 after substitution
  EXPECT_TRUE((l1 * l1 - RatFn(2) * lambda_g4(2)).is_zero());
}

TEST(Vanishing, ReferenceMonomialList) {
  auto v = vanishing_monomials_g4();
  EXPECT_EQ(v.size(), 10u);
  EXPECT_TRUE(vanishes_g4({0, 4, 0, 0}));
  EXPECT_TRUE(vanishes_g4({0, 0, 3, 0}));
  EXPECT_FALSE(vanishes_g4({3, 1, 0, 0}));
  EXPECT_FALSE(vanishes_g4({1, 1, 2, 0}));
}

TEST(Exceptional, ProductsRejected) {
  EllClass d = dpsi_class();
  EXPECT_TRUE(d.has_exceptional());
  EXPECT_THROW(d * gen4(L1), std::logic_error);
  EXPECT_EQ(fiber_intersection(d.without_exceptional(), p), p * p);
  EXPECT_EQ(fiber_intersection(d.without_exceptional(), one), p);
}

TEST(Relations, ProportionalToReference) {
  EXPECT_TRUE(nonzero_multiple(relation_lambda4().coeffs, reference_lambda4()));
  EXPECT_TRUE(nonzero_multiple(relation_c3A().coeffs, reference_second()));
  EXPECT_TRUE(nonzero_multiple(relation_c2L().coeffs, reference_third()));
  EXPECT_EQ(*proportionality(relation_lambda4().coeffs, reference_lambda4()),
            RatFn(Rational(-1, 2)) * (p - one) * (p - one));
}

TEST(Relations, ReferenceDegreeTwoRelation) {
  EllClass expect = gen4(L2, RatFn(P.pow(4) - P.pow(3) + PPoly(Rational(3, 2)) * P * P - P + PPoly(1))) * gen4(L2) -
                    gen4(L1, rp(P.pow(3) - P * P + P)) * gen4(L2) - gen4(L0, RatFn(Rational(1, 2)) * p * p) * gen4(L0) +
                    gen4(L1, RatFn(Rational(1, 2)) * p * p) * gen4(L1);
  EXPECT_EQ(c2L_on_H().to_string(), expect.to_string());
}

TEST(Relations, ReferenceCombinationForL03L1) {
  std::vector<RatFn> comb(5);
  for (std::size_t k = 0; k < 5; ++k) comb[k] = p * reference_second()[k] + (p - one) * reference_third()[k];
  std::vector<RatFn> want{RatFn(2) * p, RatFn(0), RatFn(0), RatFn(0), RatFn(-2) * (p * p - p + one)};
  EXPECT_EQ(comb, want);
}

TEST(Solve, MatchesReferenceVector) {
  auto sys = relation_system_g4();
  EXPECT_EQ(sys.rank(), 5u);
  auto sol = solve(sys);
  EXPECT_EQ(sol, reference_solution());
  for (const auto& r : residuals(sys, sol)) EXPECT_TRUE(r.is_zero());
}

TEST(Solve, ReferenceVectorSatisfiesReferenceRelations) {
  auto x = reference_solution();
  EXPECT_TRUE(dot(reference_lambda4(), x).is_zero());
  EXPECT_TRUE(dot(reference_second(), x).is_zero());
  EXPECT_TRUE(dot(reference_third(), x).is_zero());
}

TEST(Solve, OneUnknownFamily) {
  RelationSystem partial{unknowns_g4(), {relation_lambda4(), relation_c3A(), relation_c2L(), anchor_row()}};
  EXPECT_EQ(partial.rank(), 4u);
  auto aff = solve_affine_in(partial, 3);
  RatFn b = p * (p * p + one) * (p * p - p + one);
  RatFn q2 = p * p + one;
  EXPECT_EQ(aff[0], std::make_pair(b, RatFn(0)));
  EXPECT_EQ(aff[1], std::make_pair(RatFn(-2) * b, one));
  EXPECT_EQ(aff[2], std::make_pair(-(q2 * q2 * (RatFn(2) * p * p - RatFn(3) * p + RatFn(2))),
                                   RatFn(2) * (p - one + one / p)));
  EXPECT_EQ(aff[3], std::make_pair(RatFn(0), one));
  EXPECT_EQ(aff[4], std::make_pair(p * p * q2, RatFn(0)));

  // remark: deg lambda1^4 = 8 (p-1)^4 (p^2+p+1) (x/p - (p^2+1)(p-1)^2)
  auto l14 = linear_form(lambda_g4(1).pow(4));
  RatFn at0 = dot(l14, {aff[0].first, aff[1].first, aff[2].first, aff[3].first, aff[4].first});
  RatFn slope = dot(l14, {aff[0].second, aff[1].second, aff[2].second, aff[3].second, aff[4].second});
  RatFn k = RatFn(8) * rp((P - PPoly(1)).pow(4)) * (p * p + p + one);
  EXPECT_EQ(slope, k / p);
  EXPECT_EQ(at0, -(k * q2 * (p - one) * (p - one)));
}

TEST(Solve, RankDeficientThrows) {
  RelationSystem partial{unknowns_g4(), {relation_lambda4(), relation_c3A()}};
  EXPECT_ANY_THROW(solve(partial));
}

TEST(F4, DerivedCoefficient) {
  auto d = f4_derivation();
  EXPECT_TRUE(d.matches());
  EXPECT_EQ(d.f4, rp((P - PPoly(1)).pow(3)) * rp(P.pow(3) - PPoly(1)) * rp(P.pow(4) - PPoly(1)) * rp(P.pow(6) - PPoly(1)));
  EXPECT_NO_THROW(f4());
}

TEST(Crosscheck, VerdictPerPair) {
  auto cc = crosscheck_reference_g4();
  ASSERT_EQ(cc.combinations.size(), 3u);
  ASSERT_EQ(cc.pairs.size(), 3u);
  // half-(p-1)^4 combination agrees with the direct expansion
  EXPECT_TRUE(cc.pairs[1].values_agree);
  EXPECT_TRUE(cc.pairs[1].difference_in_relation_span);
  EXPECT_FALSE(cc.pairs[0].values_agree);
  EXPECT_FALSE(cc.pairs[0].difference_in_relation_span);
  EXPECT_FALSE(cc.pairs[2].values_agree);
  ASSERT_TRUE(cc.pairs[2].ratio.has_value());
  EXPECT_EQ(*cc.pairs[2].ratio, RatFn(2) / ((p - one) * (p - one)));
  // direct expansion on the reference vector, then the closed-form combination value
  RatFn direct = dot(lambda3_lambda1_form(), reference_solution());
  EXPECT_EQ(cc.combinations[2].value, direct);
  RatFn reference_value = RatFn(2) * p * (p - one) * (p - one) * (p * p + one) * (p * p + p + one);
  EXPECT_EQ(cc.combinations[1].value, reference_value);
}

TEST(GenusThree, Chain) {
  auto c = g3_chain();
  EXPECT_EQ(c.l0sq_coefficient, p * p - one);
  EXPECT_EQ(c.deg_lambda2, (p + one) * (p - one) * (p - one));
  EXPECT_EQ(c.section_self_intersection, RatFn(-2) * (p + one));
  EXPECT_EQ(c.f3, RatFn(c.f3_expected.expand()));
  EXPECT_EQ(c.f3, rp((P - PPoly(1)).pow(2)) * rp(P.pow(3) - PPoly(1)) * rp(P.pow(4) - PPoly(1)));
}

TEST(GenusThree, ContextRestrictions) {
  EXPECT_THROW(gen3(L2), std::invalid_argument);
  EXPECT_TRUE((gen3(L1) * gen3(L1)).is_zero());
}
