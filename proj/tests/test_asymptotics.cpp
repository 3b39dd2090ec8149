#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "nls/asymptotics.hpp"
#include "nls/errors.hpp"
#include "nls/random.hpp"

using namespace nls;

namespace {

nls::Setup setup_of(const MatrixField& f, const Grid& g, const Kernel& k = Kernel::uniform()) {
  return nls::Setup{g, std::vector<Kernel>(f.species(), k), f, {}};
}

const Check* find_check(const SweepResult& r, const std::string& name) {
  for (const auto& c : r.checks)
    if (c.name == name) return &c;
  return nullptr;
}

MatrixField nu3() { return MatrixField::constant(2, {2.0, 1.0, 1.0, 2.0}); }

}  // namespace

TEST(SweepDispersal, SmallRatesLinearInD) {
  const nls::Setup s = setup_of(nu3(), build_grid_1d(-1.0, 1.0, 400));
  const SweepResult r = sweep_dispersal(s, {1e-3, 1e-2});
  EXPECT_TRUE(r.pass());
  const Check* lin = find_check(r, "small_d_linear_rate");
  ASSERT_NE(lin, nullptr);
  EXPECT_LT(lin->measured, 1.1);
  EXPECT_EQ(find_check(r, "large_d_rate"), nullptr);
  // constant field: lambda_p + nu = d (1 - top eigenvalue of M) exactly
  EXPECT_NEAR((r.lambda_p[1] + 3.0) / (r.lambda_p[0] + 3.0), 10.0, 1e-6);
}

TEST(SweepDispersal, ComponentwiseMonotoneOnRandomInstances) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    nls::Setup s = setup_of(MatrixField::random(2, seed), build_grid_1d(-1.0, 1.0, 60));
    CounterRng rng(seed);
    s.direction = {rng.uniform(0.2, 2.0), rng.uniform(0.2, 2.0)};
    const SweepResult r = sweep_dispersal(s, {0.1, 0.3, 1.0, 3.0, 10.0});
    const Check* mono = find_check(r, "monotone_in_d");
    ASSERT_NE(mono, nullptr);
    EXPECT_TRUE(mono->pass) << seed;
    EXPECT_TRUE(find_check(r, "large_d_lower_bound")->pass) << seed;
  }
}

TEST(SweepDispersal, LargeRateLowerBound) {
  const nls::Setup s = setup_of(MatrixField::random(2, 3), build_grid_1d(-1.0, 1.0, 100));
  const SweepResult r = sweep_dispersal(s, {10.0, 100.0, 1000.0});
  EXPECT_TRUE(r.pass());
  EXPECT_NE(find_check(r, "large_d_rate"), nullptr);
  const double lambda0 = std::find_if(r.metrics.begin(), r.metrics.end(),
                                      [](const auto& m) { return m.first == "lambda0"; })->second;
  EXPECT_LT(lambda0, 0.0);
  EXPECT_NEAR(lambda0, scalar_principal_value(s.kernels, s.grid), 1e-14);
}

TEST(SweepDispersal, RejectsUnsortedValues) {
  const nls::Setup s = setup_of(nu3(), build_grid_1d(-1.0, 1.0, 20));
  try {
    sweep_dispersal(s, {1.0, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidInput);
  }
  EXPECT_THROW(sweep_dispersal(s, {-1.0, 0.5}), Error);
}

TEST(SweepSigma, ZeroExponentLargeSigmaSandwich) {
  const nls::Setup s = setup_of(nu3(), build_grid_1d(-1.0, 1.0, 400));
  const SweepResult r = sweep_sigma(s, 0.0, {10.0, 100.0});
  EXPECT_TRUE(r.pass());
  // large sigma: lambda_p in [1 - nu - sqrt(|J|_inf)/sigma^(1/2), 1 - nu]
  EXPECT_NEAR(r.lambda_p[1], -2.02, 1e-9);
  EXPECT_GE(r.lambda_p[1], 1.0 - 3.0 - 0.1);
  EXPECT_LE(r.lambda_p[1], 1.0 - 3.0);
  EXPECT_NEAR(r.lambda_p[0], -2.2, 1e-9);
}

TEST(SweepSigma, IntermediateExponentLimits) {
  const nls::Setup s = setup_of(MatrixField::scalar("2 - x^2"), build_grid_1d(-1.0, 1.0, 800));
  const SweepResult r = sweep_sigma(s, 1.0, {0.05, 0.5, 5.0, 50.0});
  EXPECT_TRUE(r.pass());
  EXPECT_LE(std::abs(r.lambda_p[0] + 2.0), 0.1);
  EXPECT_LE(std::abs(r.lambda_p.back() + 2.0), 2.0 / 50.0);
  for (double l : r.lambda_p) EXPECT_GE(l, -2.0 - 1e-10);
}

TEST(SweepSigma, QuadraticExponentLargeSigma) {
  const nls::Setup s = setup_of(MatrixField::scalar("2 - x^2"), build_grid_1d(-1.0, 1.0, 200));
  const SweepResult r = sweep_sigma(s, 2.0, {1.0, 10.0, 100.0});
  EXPECT_TRUE(r.pass());
  EXPECT_LE(std::abs(r.lambda_p.back() + 2.0), 1e-4 + 1e-3);
}

TEST(SweepSigma, ResolutionGuard) {
  const nls::Setup s = setup_of(nu3(), build_grid_1d(-1.0, 1.0, 100));
  EXPECT_THROW(sweep_sigma(s, 1.0, {0.02, 1.0}), ResolutionError);
  EXPECT_THROW(sweep_sigma(s, 3.0, {1.0}), Error);
}

TEST(ScalingInvariance, UnitSigmaIdentical) {
  const InvarianceReport r = scaling_invariance_check(setup_of(MatrixField::random(2, 5), build_grid_1d(-1.0, 1.0, 50)), 1.0);
  EXPECT_EQ(r.matrix_gap, 0.0);
  EXPECT_EQ(r.lambda_gap, 0.0);
  EXPECT_TRUE(r.pass);
}

TEST(ScalingInvariance, MatchedGridsAgree) {
  const nls::Setup s = setup_of(MatrixField::scalar("1 - x^2"), build_grid_1d(-1.0, 1.0, 300));
  const InvarianceReport two = scaling_invariance_check(s, 2.0);
  EXPECT_LE(two.matrix_gap, 1e-12);
  EXPECT_TRUE(two.pass);
  const InvarianceReport half = scaling_invariance_check(s, 0.5);
  EXPECT_LE(half.lambda_gap, 1e-10);
  EXPECT_TRUE(half.pass);
}

TEST(ScalingInvariance, MismatchedGridRejected) {
  const nls::Setup s = setup_of(MatrixField::scalar("1"), build_grid_1d(-1.0, 1.0, 40));
  try {
    scaling_invariance_check(s, 2.0, build_grid_1d(-2.0, 2.0, 41));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidSetup);
  }
  EXPECT_THROW(scaling_invariance_check(s, 2.0, build_grid_1d(-2.0, 2.2, 40)), Error);
  EXPECT_TRUE(scaling_invariance_check(s, 2.0, build_grid_1d(-2.0, 2.0, 40)).pass);
}

TEST(DomainMonotonicity, EqualDomains) {
  const nls::Setup s = setup_of(MatrixField::random(2, 8), build_grid_1d(-1.0, 1.0, 100));
  const MonotonicityReport r = domain_monotonicity_check(s, Box::interval(-1.0, 1.0), 1.0, 0.0);
  EXPECT_NEAR(r.gap, 0.0, 1e-12);
  EXPECT_EQ(r.removed_measure, 0.0);
  EXPECT_TRUE(r.pass());
}

TEST(DomainMonotonicity, NestedInterval) {
  const nls::Setup s = setup_of(MatrixField::scalar("1 - x^2"), build_grid_1d(-1.0, 1.0, 200));
  const MonotonicityReport r = domain_monotonicity_check(s, Box::interval(-0.9, 0.9), 1.0, 1.0);
  EXPECT_TRUE(r.pass());
  EXPECT_GT(r.gap, 0.0);
  EXPECT_NEAR(r.removed_measure, 0.2, 1e-12);
  EXPECT_LE(r.gap, r.c0 * 0.2);
}

TEST(DomainMonotonicity, ShrinkingSequence) {
  const nls::Setup s = setup_of(MatrixField::random(2, 2), build_grid_1d(-1.0, 1.0, 200));
  double prev = -std::numeric_limits<double>::infinity();
  for (double r : {1.0, 0.9, 0.7, 0.5, 0.3}) {
    const MonotonicityReport m = domain_monotonicity_check(s, Box::interval(-r, r), 0.5, 1.0);
    EXPECT_TRUE(m.pass()) << r;
    EXPECT_GE(m.lambda_inner, prev - 1e-10);
    prev = m.lambda_inner;
  }
}

TEST(DomainMonotonicity, UnalignedInnerBoxRejected) {
  const nls::Setup s = setup_of(MatrixField::scalar("1"), build_grid_1d(-1.0, 1.0, 20));
  EXPECT_THROW(domain_monotonicity_check(s, Box::interval(-0.93, 0.9), 1.0, 0.0), Error);
}

TEST(BuildBump, ConstantFieldGivesNu) {
  const BumpFunction b = build_bump(nu3(), build_grid_1d(-1.0, 1.0, 200), 4);
  EXPECT_NEAR(b.a_form, 3.0, 1e-12);
  EXPECT_DOUBLE_EQ(b.nu, 3.0);
}

TEST(BuildBump, ParabolaMeetsLevel) {
  const Grid g = build_grid_1d(-1.0, 1.0, 400);
  const BumpFunction b = build_bump(MatrixField::scalar("2 - x^2"), g, 10);
  EXPECT_GE(b.a_form, 2.0 - 2.0 / 10.0);
  double norm = 0.0;
  for (double v : b.values) norm += g.weight * v * v;
  EXPECT_NEAR(norm, 1.0, 1e-12);
  // support strictly inside the domain
  EXPECT_EQ(b.values.front(), 0.0);
  EXPECT_EQ(b.values.back(), 0.0);
  EXPECT_GT(b.center - b.radius, -1.0 - 1e-12);
  EXPECT_LT(b.center + b.radius, 1.0 + 1e-12);
}

TEST(BuildBump, CounterexampleField) {
  const BumpFunction b = build_bump(MatrixField::counterexample_2sp(), build_grid_1d(0.0, 0.2, 400), 5);
  EXPECT_GE(b.a_form, 1.0 - 2.0 / 5.0 - 0.01);
  EXPECT_GT(b.level, 0.0);
}

TEST(BuildBump, Errors) {
  EXPECT_THROW(build_bump(nu3(), build_grid_1d(0.0, 1.0, 20), 0), Error);
  const int counts[] = {4, 4};
  EXPECT_THROW(build_bump(nu3(), build_grid(Box::rectangle(0, 1, 0, 1), counts), 3), Error);
  // a spike at one node cannot host a ball of radius >= h
  EXPECT_THROW(build_bump(MatrixField::scalar("-abs(x - 0.525) * 1000"), build_grid_1d(0.0, 1.0, 20), 1000),
               ResolutionError);
}

TEST(GradientInequality, TaperedSine) {
  const Grid g = build_grid_1d(0.0, 1.0, 1000);
  const GradientReport r = gradient_inequality_check(Kernel::uniform(), g, tapered_sine(g));
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.d2, 1.0 / 12.0, 1e-12);
  // ||phi||^2 = 1/2 on the shrunk interval, ||phi'||^2 = pi^2 / (2 L)
  const double len = 1.0 - 6.0e-3;
  EXPECT_NEAR(r.rhs, 0.5 / 12.0 * M_PI * M_PI / (2.0 * len), 1e-3);
  EXPECT_LE(r.lhs, 0.5 / 12.0 * M_PI * M_PI * 1.05);
  EXPECT_GT(r.lhs, 0.0);
}

TEST(GradientInequality, Plateau) {
  const Grid g = build_grid_1d(0.0, 1.0, 500);
  std::vector<double> phi(g.size(), 0.0);
  for (std::size_t p = 0; p < g.size(); ++p) {
    const double x = g.x(p);
    phi[p] = std::clamp(std::min(x - 0.1, 0.9 - x) / 0.1, 0.0, 1.0);
  }
  const GradientReport r = gradient_inequality_check(Kernel::triangle(), g, phi);
  EXPECT_TRUE(r.pass);
  EXPECT_GT(r.lhs, 0.0);
}

TEST(GradientInequality, ZeroProfileAndPreconditions) {
  const Grid g = build_grid_1d(0.0, 1.0, 50);
  const GradientReport r = gradient_inequality_check(Kernel::uniform(), g, std::vector<double>(50, 0.0));
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.pass);
  try {
    gradient_inequality_check(Kernel::uniform(), g, std::vector<double>(50, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Precondition);
  }
  EXPECT_THROW(gradient_inequality_check(Kernel::uniform(), g, std::vector<double>(49, 0.0)), Error);
}

TEST(BoundsCheck, ConstantFieldTwoSided) {
  const AssembledOperator op =
      assemble_K({1.0, 1.0}, {Kernel::uniform(), Kernel::uniform()}, nu3(), build_grid_1d(-1.0, 1.0, 200));
  const BoundsReport r = bounds_check(op);
  EXPECT_TRUE(r.pass);
  EXPECT_NEAR(r.lambda_v, -3.9241502856369985, 1e-9);
  EXPECT_GE(r.lambda_v, -4.0);
  EXPECT_LT(r.lambda_v, -3.0);
  EXPECT_TRUE(r.strict_guaranteed);
}

TEST(BoundsCheck, RandomConstantFields) {
  CounterRng rng(404);
  for (int t = 0; t < 5; ++t) {
    const double off = rng.uniform(0.1, 1.0);
    const MatrixField f = MatrixField::constant(2, {rng.uniform(-2.0, 2.0), off, off, rng.uniform(-2.0, 2.0)});
    const BoundsReport r = bounds_check(
        assemble_K({1.0, 1.0}, {Kernel::uniform(), Kernel::triangle()}, f, build_grid_1d(-1.0, 1.0, 120)));
    EXPECT_TRUE(r.lower_ok) << t;
    EXPECT_TRUE(r.strict_ok) << t;
    EXPECT_TRUE(r.pass) << t;
  }
}

TEST(BoundsCheck, CounterexampleNotGuaranteed) {
  const AssembledOperator op = assemble_K({1.0, 1.0}, {trapezoid_kernel(1.05), trapezoid_kernel(1.05)},
                                          MatrixField::counterexample_2sp(), build_grid_1d(0.0, 0.2, 100));
  const BoundsReport r = bounds_check(op);
  EXPECT_TRUE(r.lower_ok);
  EXPECT_FALSE(r.strict_guaranteed);
  EXPECT_TRUE(r.pass);
}

TEST(BoundsCheck, NeedsUnitRates) {
  const AssembledOperator op =
      assemble_K({2.0, 1.0}, {Kernel::uniform(), Kernel::uniform()}, nu3(), build_grid_1d(-1.0, 1.0, 20));
  EXPECT_THROW(bounds_check(op), Error);
}
