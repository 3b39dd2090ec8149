#include <cmath>

#include <gtest/gtest.h>

#include "nls/errors.hpp"
#include "nls/quadrature.hpp"
#include "nls/rankone.hpp"

using namespace nls;

namespace {

ScalarPotential minus_sqrt(double hi) { return ScalarPotential::from_expression("-sqrt(x)", 0.0, hi); }

// closed form of int_0^1 dx / (lambda + sqrt x) after t = sqrt x
double f_closed(double lambda) { return 2.0 * (1.0 - lambda * std::log(1.0 + 1.0 / lambda)); }

// bisection on the closed form, independent of the library's quadrature
double closed_root() {
  double lo = 1e-6, hi = 10.0;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::log(1.0 + 1.0 / mid) < 0.5 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(ImproperIntegral, SquareRootOnShortInterval) {
  const IntegralResult r = improper_integral(minus_sqrt(0.2));
  EXPECT_FALSE(r.divergent);
  EXPECT_NEAR(r.value, 0.894427190999915878564, 1e-9);
}

TEST(ImproperIntegral, ConstantAndUnitInterval) {
  EXPECT_NEAR(improper_integral(ScalarPotential::from_expression("-2.5", 0.0, 3.0)).value, 3.0 / 2.5, 1e-12);
  EXPECT_NEAR(improper_integral(minus_sqrt(1.0)).value, 2.0, 1e-9);
}

TEST(ImproperIntegral, LinearZeroDiverges) {
  const IntegralResult r = improper_integral(ScalarPotential::from_expression("-x", 0.0, 1.0));
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
  EXPECT_TRUE(improper_integral(ScalarPotential::from_expression("0", 0.0, 1.0)).divergent);
}

TEST(ImproperIntegral, InteriorZeroFound) {
  const ScalarPotential a = ScalarPotential::from_expression("-sqrt(abs(x - 0.3))", 0.0, 1.0);
  ASSERT_EQ(a.zeros().size(), 1u);
  EXPECT_NEAR(a.zeros()[0], 0.3, 1e-8);
  // 2 sqrt(0.3) + 2 sqrt(0.7)
  EXPECT_NEAR(improper_integral(a).value, 2.0 * std::sqrt(0.3) + 2.0 * std::sqrt(0.7), 1e-8);
}

TEST(ScalarPotentialTest, PositiveRejected) {
  try {
    ScalarPotential::from_expression("x - 0.5", 0.0, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidPotential);
  }
  EXPECT_THROW(ScalarPotential::from_expression("-1", 1.0, 0.0), Error);
}

TEST(FFunction, ZeroPotential) {
  const ScalarPotential a = ScalarPotential::from_expression("0", 0.0, 1.0);
  for (double l : {0.1, 0.5, 2.0}) EXPECT_NEAR(F(l, a).value, 1.0 / l, 1e-12);
}

TEST(FFunction, ClosedFormValues) {
  const ScalarPotential a = minus_sqrt(1.0);
  EXPECT_NEAR(f_closed(0.1), 1.5204209454403258646, 1e-15);
  EXPECT_NEAR(f_closed(0.4), 0.99778962520370554782, 1e-15);
  EXPECT_NEAR(f_closed(1.0), 0.61370563888010938117, 1e-15);
  for (double l : {0.1, 0.4, 1.0}) EXPECT_NEAR(F(l, a).value, f_closed(l), 1e-9) << l;
}

TEST(FFunction, StrictlyDecreasingAndBounded) {
  const ScalarPotential a = minus_sqrt(1.0);
  EXPECT_GT(F(0.5, a).value, F(1.0, a).value);
  double prev = F(0.01, a).value;
  for (double l = 0.02; l < 3.0; l *= 1.3) {
    const double v = F(l, a).value;
    EXPECT_LT(v, prev);
    EXPECT_LE(v, a.length() / l);
    prev = v;
  }
}

TEST(FFunction, NegativeLambdaIsDomainError) {
  try {
    F(-0.1, minus_sqrt(1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
}

TEST(SolveRankOne, ZeroPotentialHasUnitRoot) {
  const RankOneResult r = solve_rank_one(ScalarPotential::from_expression("0", 0.0, 1.0));
  ASSERT_TRUE(r.root.has_value());
  EXPECT_NEAR(*r.root, 1.0, 1e-9);
  EXPECT_EQ(r.verdict, RankOneVerdict::Eigenpair);
  EXPECT_NEAR(r.profile(0.3), 1.0, 1e-9);
}

TEST(SolveRankOne, ShortIntervalHasNoEigenfunction) {
  const RankOneResult r = solve_rank_one(minus_sqrt(0.2));
  EXPECT_EQ(r.verdict, RankOneVerdict::NoEigenfunction);
  EXPECT_FALSE(r.root.has_value());
  EXPECT_STREQ(to_string(r.verdict), "no_eigenfunction");
}

TEST(SolveRankOne, UnitIntervalRoot) {
  const double oracle = closed_root();
  EXPECT_NEAR(oracle, 0.397952547315916544786, 1e-14);
  const RankOneResult r = solve_rank_one(minus_sqrt(1.0));
  ASSERT_TRUE(r.root.has_value());
  EXPECT_NEAR(*r.root, oracle, 1e-6);
  EXPECT_NEAR(*r.root * std::log(1.0 + 1.0 / *r.root), 0.5, 1e-6);
  EXPECT_GT(r.bisection_steps, 20);
  // int phi = 1 and phi solves int phi + a phi = lambda phi
  const double mass = adaptive_gauss(r.profile, 0.0, 1.0);
  EXPECT_NEAR(mass, 1.0, 1e-6);
  for (double x : {0.01, 0.2, 0.9}) EXPECT_NEAR(mass - std::sqrt(x) * r.profile(x), *r.root * r.profile(x), 1e-6);
}

TEST(SolveRankOne, VerdictFollowsSignOfI0MinusOne) {
  for (double hi : {0.1, 0.2, 0.24, 0.26, 0.5, 1.0}) {
    const ScalarPotential a = minus_sqrt(hi);
    const RankOneResult r = solve_rank_one(a);
    // I0 = 2 sqrt(hi), equal to one at hi = 1/4
    EXPECT_EQ(r.verdict == RankOneVerdict::Eigenpair, 2.0 * std::sqrt(hi) >= 1.0) << hi;
  }
}

TEST(Concentration, CounterexampleMassPilesUp) {
  const ConcentrationTable t = concentration_study(trapezoid_kernel(1.05), {100, 200, 400, 800});
  EXPECT_TRUE(t.concentration);
  EXPECT_TRUE(t.reduction_consistent);
  for (std::size_t k = 1; k < t.rows.size(); ++k) {
    EXPECT_GE(t.rows[k].ratio / t.rows[k - 1].ratio, 1.2);
    EXPECT_LE(std::abs(t.rows[k].lambda_p - t.rows[k].scalar_lambda_p), 1e-8);
  }
}

TEST(Concentration, LipschitzControlStaysBounded) {
  const ConcentrationTable t = concentration_study(trapezoid_kernel(1.05), {100, 200, 400, 800}, "1 - x");
  EXPECT_FALSE(t.concentration);
  EXPECT_LE(t.last_ratio_change, 1.05);
  EXPECT_TRUE(t.reduction_consistent);
}

TEST(Concentration, MollifiedKernelAgrees) {
  const ConcentrationTable t = concentration_study(kernel_from_name("mollified_trapezoid(1.05)"), {50, 100, 200});
  EXPECT_TRUE(t.concentration);
}

TEST(Concentration, Preconditions) {
  try {
    concentration_study(Kernel::triangle(), {50, 100, 200});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidKernel);
  }
  EXPECT_THROW(concentration_study(trapezoid_kernel(1.05), {50, 100}), Error);
  EXPECT_THROW(concentration_study(trapezoid_kernel(1.05), {50, 200, 100}), Error);
}
