#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "nls/errors.hpp"
#include "nls/expr.hpp"
#include "nls/linalg.hpp"
#include "nls/quadrature.hpp"
#include "nls/random.hpp"

using namespace nls;

TEST(Expression, Arithmetic) {
  EXPECT_DOUBLE_EQ(Expression("1 + 2 * 3")(0.0), 7.0);
  EXPECT_DOUBLE_EQ(Expression("2 ^ 3 ^ 2")(0.0), 512.0);
  EXPECT_DOUBLE_EQ(Expression("-x^2")(3.0), -9.0);
  EXPECT_DOUBLE_EQ(Expression("(1 - sqrt(x)) * 2/3")(0.25), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(Expression("x*y + abs(-2)")(2.0, 5.0), 12.0);
  EXPECT_NEAR(Expression("sin(pi/2) + cos(0) + exp(0) + log(1)")(0.0), 3.0, 1e-15);
}

TEST(Expression, ParseErrorsNameTheColumn) {
  try {
    Expression e("1 + * 2");
    FAIL() << "expected a parse error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("column"), std::string::npos);
  }
  EXPECT_THROW(Expression("foo(x)"), Error);
  EXPECT_THROW(Expression("(x"), Error);
  EXPECT_THROW(Expression(""), Error);
}

TEST(Random, SplitmixReferenceOutput) {
  // first output of the reference splitmix64 stream seeded with 0
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Random, CounterDrawsAreFrozen) {
  EXPECT_EQ(counter_draw(42, 0), 0xa469845270661dadULL);
  EXPECT_EQ(counter_draw(42, 1), 0x1979612563da081aULL);
  EXPECT_EQ(counter_draw(42, 1000), 0xa0666f0223d4352cULL);
}

TEST(Random, StreamMatchesDirectAccess) {
  CounterRng rng(7);
  for (std::uint64_t k = 0; k < 100; ++k) EXPECT_EQ(rng.next_u64(), counter_draw(7, k));
  CounterRng late(7, 50);
  EXPECT_EQ(late.next_u64(), counter_draw(7, 50));
}

TEST(Random, UniformRange) {
  CounterRng rng(123);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  for (int k = 0; k < 20000; ++k) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  EXPECT_GE(lo, 0.0);
  EXPECT_LT(hi, 1.0);
  EXPECT_NEAR(sum / 20000.0, 0.5, 0.01);
  for (int k = 0; k < 1000; ++k) {
    const int v = rng.uniform_int(30, 200);
    EXPECT_GE(v, 30);
    EXPECT_LE(v, 200);
  }
}

TEST(Quadrature, GaussLegendreIsExactForPolynomials) {
  EXPECT_NEAR(gauss_legendre8([](double x) { return std::pow(x, 15); }, 0.0, 1.0), 1.0 / 16.0, 1e-15);
}

TEST(Quadrature, AdaptiveHandlesKinks) {
  const double v = adaptive_gauss([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0);
  EXPECT_NEAR(v, 0.5 * 0.09 + 0.5 * 0.49, 1e-13);
}

TEST(Quadrature, CompositeRespectsBreakpoints) {
  const double cut[] = {0.5};
  const double v = composite_gauss([](double x) { return x < 0.5 ? 1.0 : 0.0; }, 0.0, 1.0, cut, 8);
  EXPECT_NEAR(v, 0.5, 1e-15);
}

TEST(Quadrature, GradedIntegrableSingularity) {
  const double sing[] = {0.0};
  const GradedResult r = graded_integral([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, sing);
  EXPECT_FALSE(r.divergent);
  EXPECT_NEAR(r.value, 2.0, 1e-9);
}

TEST(Quadrature, GradedDetectsDivergence) {
  const double sing[] = {0.0};
  const GradedResult r = graded_integral([](double x) { return 1.0 / x; }, 0.0, 1.0, sing);
  EXPECT_TRUE(r.divergent);
  EXPECT_TRUE(std::isinf(r.value));
}

TEST(Linalg, JacobiDiagonal) {
  DenseMatrix a(3);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  a(2, 2) = 3.0;
  const SymmetricEigen e = jacobi_eigen(a, true);
  ASSERT_EQ(e.values.size(), 3u);
  EXPECT_DOUBLE_EQ(e.values[0], 3.0);
  EXPECT_DOUBLE_EQ(e.values[1], 2.0);
  EXPECT_DOUBLE_EQ(e.values[2], 1.0);
}

TEST(Linalg, JacobiTwoByTwo) {
  DenseMatrix a(2);
  a(0, 0) = 2.0;
  a(0, 1) = 1.0;
  a(1, 0) = 1.0;
  a(1, 1) = 2.0;
  const SymmetricEigen e = jacobi_eigen(a, true);
  EXPECT_NEAR(e.values[0], 3.0, 1e-15);
  EXPECT_NEAR(e.values[1], 1.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors[0][0]), std::numbers::sqrt2 / 2.0, 1e-15);
  EXPECT_NEAR(std::abs(e.vectors[0][1]), std::numbers::sqrt2 / 2.0, 1e-15);
}

TEST(Linalg, LuSolvesNonsymmetric) {
  DenseMatrix a(3);
  const double v[3][3] = {{0.0, 2.0, 1.0}, {1.0, 1.0, 0.0}, {3.0, 0.0, 1.0}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) a(i, j) = v[i][j];
  const std::vector<double> x = LuFactorization(a).solve(std::vector<double>{5.0, 3.0, 6.0});
  for (int i = 0; i < 3; ++i) {
    double s = 0.0;
    for (int j = 0; j < 3; ++j) s += v[i][j] * x[j];
    EXPECT_NEAR(s, (std::vector<double>{5.0, 3.0, 6.0})[i], 1e-14);
  }
}

TEST(Linalg, CholeskyDetectsIndefinite) {
  DenseMatrix a(2);
  a(0, 0) = 1.0;
  a(0, 1) = 2.0;
  a(1, 0) = 2.0;
  a(1, 1) = 1.0;
  EXPECT_FALSE(CholeskyFactorization(a).ok());
  a(1, 1) = 5.0;
  CholeskyFactorization c(a);
  ASSERT_TRUE(c.ok());
  const auto x = c.solve(std::vector<double>{1.0, 0.0});
  EXPECT_NEAR(x[0], 5.0, 1e-14);
  EXPECT_NEAR(x[1], -2.0, 1e-14);
}
