#include <cmath>

#include <gtest/gtest.h>

#include "nls/errors.hpp"
#include "nls/grid_kernel.hpp"
#include "nls/random.hpp"

using namespace nls;

TEST(BuildGrid, MidpointNodesOnSymmetricInterval) {
  const Grid g = build_grid_1d(-1.0, 1.0, 4);
  ASSERT_EQ(g.size(), 4u);
  const double want[] = {-0.75, -0.25, 0.25, 0.75};
  for (int p = 0; p < 4; ++p) EXPECT_DOUBLE_EQ(g.x(p), want[p]);
  EXPECT_DOUBLE_EQ(g.weight, 0.5);
}

TEST(BuildGrid, ShortInterval) {
  const Grid g = build_grid_1d(0.0, 0.2, 2);
  EXPECT_NEAR(g.x(0), 0.05, 1e-17);
  EXPECT_NEAR(g.x(1), 0.15, 1e-16);
  EXPECT_NEAR(g.weight, 0.1, 1e-17);
}

TEST(BuildGrid, SingleNodeRejected) {
  try {
    build_grid_1d(0.0, 1.0, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidResolution);
  }
}

TEST(BuildGrid, RectangleIsRowMajor) {
  const int counts[] = {2, 3};
  const Grid g = build_grid(Box::rectangle(0.0, 1.0, 0.0, 3.0), counts);
  ASSERT_EQ(g.size(), 6u);
  EXPECT_DOUBLE_EQ(g.weight, 0.5 * 1.0);
  EXPECT_DOUBLE_EQ(g.nodes[1][0], 0.25);
  EXPECT_DOUBLE_EQ(g.nodes[1][1], 1.5);
  EXPECT_DOUBLE_EQ(g.nodes[3][0], 0.75);
  EXPECT_DOUBLE_EQ(g.nodes[3][1], 0.5);
}

TEST(BuildGrid, EmptyBoxRejected) {
  EXPECT_THROW(build_grid_1d(1.0, 1.0, 4), Error);
  EXPECT_THROW(build_grid_1d(1.0, 0.0, 4), Error);
}

TEST(ValidateKernel, UniformPasses) {
  const KernelReport r = validate_kernel(Kernel::uniform(), 1024, 1e-12);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.mass, 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(Kernel::uniform()(0.25), 1.0);
  EXPECT_DOUBLE_EQ(Kernel::uniform()(0.75), 0.0);
}

TEST(ValidateKernel, TrianglePasses) {
  const KernelReport r = validate_kernel(Kernel::triangle(), 1024, 1e-12);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.mass, 1.0, 1e-14);
}

TEST(ValidateKernel, DoubledUniformFailsWithMassTwo) {
  const KernelReport r = validate_kernel(Kernel::uniform().times(2.0), 1024, 1e-10);
  EXPECT_FALSE(r.pass());
  EXPECT_FALSE(r.mass_ok);
  EXPECT_NEAR(r.mass, 2.0, 1e-13);
}

TEST(ValidateKernel, NegativeLobeFails) {
  const Kernel bad = Kernel::custom(
      "wiggle", [](double z) { return std::abs(z) < 1.0 ? 0.5 + 0.8 * std::cos(3.0 * M_PI * z) : 0.0; },
      1.0);
  EXPECT_FALSE(validate_kernel(bad, 1024, 1e-8).nonnegative_ok);
}

TEST(ValidateKernel, AsymmetricFails) {
  const Kernel bad = Kernel::custom(
      "tilted", [](double z) { return std::abs(z) < 0.5 ? 1.0 + 0.5 * z : 0.0; }, 0.5);
  const KernelReport r = validate_kernel(bad, 1024, 1e-10);
  EXPECT_FALSE(r.symmetric_ok);
  EXPECT_NEAR(r.mass, 1.0, 1e-12);
}

TEST(ValidateKernel, LowResolutionRejected) {
  EXPECT_THROW(validate_kernel(Kernel::uniform(), 8, 1e-10), Error);
}

TEST(ValidateKernel, PresetsPass) {
  for (const char* name : {"uniform", "triangle", "trapezoid(1.05)", "mollified_trapezoid(1.05)",
                           "gauss_cutoff(0.3,1.5)", "gauss_cutoff(0.1,0.8)"}) {
    const KernelReport r = validate_kernel(kernel_from_name(name), 2048, 1e-10);
    EXPECT_TRUE(r.pass()) << name << " mass " << r.mass;
  }
}

TEST(ValidateKernel, TwoDimensionalProductKernel) {
  const KernelReport r = validate_kernel(Kernel::triangle(2), 512, 1e-12);
  EXPECT_TRUE(r.pass());
  EXPECT_NEAR(r.mass, 1.0, 1e-13);
  EXPECT_DOUBLE_EQ(Kernel::triangle(2)(0.5, 0.5), 0.25);
}

TEST(SecondMoment, UniformIsOneTwelfth) {
  EXPECT_NEAR(second_moment(Kernel::uniform(), 2048).value, 1.0 / 12.0, 1e-12);
}

TEST(SecondMoment, TriangleIsOneSixth) {
  EXPECT_NEAR(second_moment(Kernel::triangle(), 2048).value, 1.0 / 6.0, 1e-12);
}

TEST(SecondMoment, ScalesWithSigmaSquared) {
  for (double sigma : {0.1, 0.5, 3.0}) {
    const double base = second_moment(Kernel::triangle(), 2048).value;
    EXPECT_NEAR(second_moment(scale_kernel(Kernel::triangle(), sigma), 2048).value, sigma * sigma * base,
                1e-12 * sigma * sigma);
  }
}

TEST(SecondMoment, NeedsCutoff) {
  const Kernel open = Kernel::custom("cauchy", [](double z) { return 1.0 / (M_PI * (1.0 + z * z)); },
                                     std::nullopt);
  try {
    second_moment(open, 256);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingCutoff);
  }
}

TEST(SecondMoment, TwoDimensionalSumsBothAxes) {
  // |z|^2 = z0^2 + z1^2 with a product of unit-mass profiles
  EXPECT_NEAR(second_moment(Kernel::uniform(2), 2048).value, 2.0 / 12.0, 1e-12);
}

TEST(ScaleKernel, IdentityAtSigmaOne) {
  const Kernel k = Kernel::triangle();
  const Kernel s = scale_kernel(k, 1.0);
  for (double z = -1.2; z <= 1.2; z += 0.01) EXPECT_EQ(k(z), s(z));
}

TEST(ScaleKernel, UniformDoubled) {
  const Kernel s = scale_kernel(Kernel::uniform(), 2.0);
  EXPECT_DOUBLE_EQ(s(0.9), 0.5);
  EXPECT_DOUBLE_EQ(s(-0.3), 0.5);
  EXPECT_DOUBLE_EQ(s(1.1), 0.0);
  EXPECT_DOUBLE_EQ(*s.support_radius(), 1.0);
}

TEST(ScaleKernel, MassPreserved) {
  for (double sigma : {0.1, 10.0})
    for (const char* name : {"uniform", "triangle", "trapezoid(1.05)"})
      EXPECT_NEAR(kernel_mass(scale_kernel(kernel_from_name(name), sigma), 2048), 1.0, 1e-12) << name;
}

TEST(ScaleKernel, NonPositiveSigmaRejected) {
  EXPECT_THROW(scale_kernel(Kernel::uniform(), 0.0), Error);
  EXPECT_THROW(scale_kernel(Kernel::uniform(), -1.0), Error);
}

TEST(TrapezoidKernel, WidthAndMass) {
  const Kernel k = trapezoid_kernel(1.05);
  const double w = 1.0 / 1.05 - 0.2;
  EXPECT_NEAR(w, 0.752380952380952329570, 1e-15);
  EXPECT_NEAR(*k.support_radius(), w, 1e-15);
  // closed form c (W + 0.2) = 1, checked by quadrature
  EXPECT_NEAR(1.05 * (w + 0.2), 1.0, 1e-15);
  EXPECT_NEAR(kernel_mass(k, 4096), 1.0, 1e-12);
}

TEST(TrapezoidKernel, CloseToOneOnCore) {
  const Kernel k = trapezoid_kernel(1.05);
  const double eps_max = 0.118033988749894848205;  // sqrt(5)/2 - 1
  for (double z = -0.2; z <= 0.2; z += 0.001) EXPECT_LT(std::abs(k(z) - 1.0), eps_max);
  EXPECT_NEAR(std::abs(k(0.0) - 1.0), 0.05, 1e-15);
}

TEST(TrapezoidKernel, TooTallRejected) {
  try {
    trapezoid_kernel(6.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidParameter);
  }
  EXPECT_THROW(trapezoid_kernel(1.0), Error);
}

TEST(KernelFromName, ParsesArguments) {
  EXPECT_EQ(kernel_from_name("trapezoid(1.05)").id(), trapezoid_kernel(1.05).id());
  EXPECT_EQ(kernel_from_name(" uniform ").id(), "uniform");
  EXPECT_THROW(kernel_from_name("trapezoid"), Error);
  EXPECT_THROW(kernel_from_name("parabola"), Error);
  EXPECT_THROW(kernel_from_name("gauss_cutoff(0.1)"), Error);
}

TEST(KernelJump, AveragesOneSidedValues) {
  EXPECT_DOUBLE_EQ(Kernel::uniform()(0.5), 0.5);
  EXPECT_DOUBLE_EQ(Kernel::uniform()(-0.5), 0.5);
}

// Seeded property: random scalings keep unit mass and scale D2 by sigma^2.
TEST(KernelProperty, RandomScalings) {
  CounterRng rng(2024);
  const double d2 = second_moment(Kernel::uniform(), 2048).value;
  for (int t = 0; t < 20; ++t) {
    const double sigma = std::exp(rng.uniform(-3.0, 3.0));
    const Kernel k = scale_kernel(Kernel::uniform(), sigma);
    EXPECT_NEAR(kernel_mass(k, 1024), 1.0, 1e-12);
    EXPECT_NEAR(second_moment(k, 1024).value / (sigma * sigma), d2, 1e-12);
  }
}
