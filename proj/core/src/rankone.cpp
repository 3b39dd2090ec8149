#include "nls/rankone.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nls/errors.hpp"
#include "nls/expr.hpp"
#include "nls/matfield.hpp"
#include "nls/operator.hpp"
#include "nls/quadrature.hpp"
#include "nls/spectra.hpp"

namespace nls {

namespace {

constexpr int kSamples = 4097;

double golden_max(const std::function<double(double)>& f, double a, double b) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a);
  double d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 100 && b - a > 1e-16 * std::max(1.0, std::abs(a)); ++it) {
    if (fc >= fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return fc >= fd ? c : d;
}

}  // namespace

ScalarPotential::ScalarPotential(std::string name, std::function<double(double)> a, double lo,
                                 double hi, std::optional<std::vector<double>> zeros)
    : name_(std::move(name)), a_(std::move(a)), lo_(lo), hi_(hi) {
  if (!(lo < hi)) throw Error(ErrorKind::InvalidParameter, "potential interval needs lo < hi");
  std::vector<double> xs(kSamples), vs(kSamples);
  bool all_zero = true;
  for (int k = 0; k < kSamples; ++k) {
    xs[k] = k + 1 == kSamples ? hi : lo + (hi - lo) * k / (kSamples - 1);
    vs[k] = a_(xs[k]);
    if (!(vs[k] <= 1e-12))
      throw Error(ErrorKind::InvalidPotential,
                  "potential '" + name_ + "' is positive at x = " + std::to_string(xs[k]));
    if (std::abs(vs[k]) > 1e-14) all_zero = false;
  }
  all_zero_ = all_zero;
  if (zeros) {
    zeros_ = *zeros;
  } else if (!all_zero_) {
    std::vector<double> found;
    for (int k = 0; k < kSamples; ++k) {
      if (std::abs(vs[k]) <= 1e-14) {
        found.push_back(xs[k]);
        continue;
      }
      const bool left = k == 0 || vs[k] >= vs[k - 1];
      const bool right = k + 1 == kSamples || vs[k] >= vs[k + 1];
      if (!(left && right)) continue;
      const double x = golden_max(a_, xs[std::max(k - 1, 0)], xs[std::min(k + 1, kSamples - 1)]);
      if (std::abs(a_(x)) <= 1e-12) found.push_back(x);
    }
    std::sort(found.begin(), found.end());
    for (double z : found)
      if (zeros_.empty() || z - zeros_.back() > 1e-9 * (hi - lo)) zeros_.push_back(z);
  }
}

ScalarPotential ScalarPotential::from_expression(const std::string& expr, double lo, double hi) {
  Expression e(expr);
  return ScalarPotential(expr, [e](double x) { return e(x); }, lo, hi);
}

namespace {

IntegralResult graded(const std::function<double(double)>& g, const ScalarPotential& a) {
  const GradedResult r = graded_integral(g, a.lo(), a.hi(), a.zeros());
  IntegralResult out;
  out.value = r.value;
  out.error = r.error_estimate;
  out.divergent = r.divergent;
  return out;
}

IntegralResult divergent() {
  IntegralResult out;
  out.value = std::numeric_limits<double>::infinity();
  out.error = std::numeric_limits<double>::infinity();
  out.divergent = true;
  return out;
}

}  // namespace

IntegralResult improper_integral(const ScalarPotential& a) {
  if (a.identically_zero()) return divergent();
  return graded([&](double x) { return 1.0 / (-a(x)); }, a);
}

IntegralResult F(double lambda, const ScalarPotential& a) {
  if (!(lambda >= 0.0)) throw Error(ErrorKind::Domain, "F(lambda) is defined for lambda >= 0");
  if (lambda == 0.0) return improper_integral(a);
  return graded([&](double x) { return 1.0 / (lambda - a(x)); }, a);
}

const char* to_string(RankOneVerdict v) noexcept {
  return v == RankOneVerdict::Eigenpair ? "eigenpair" : "no_eigenfunction";
}

RankOneResult solve_rank_one(const ScalarPotential& a) {
  RankOneResult out;
  out.i0 = improper_integral(a);
  if (!out.i0.divergent && out.i0.value < 1.0) {
    out.verdict = RankOneVerdict::NoEigenfunction;
    return out;
  }
  double lo = 0.0;
  double hi = a.length();
  const double f_hi = F(hi, a).value;
  if (f_hi > 1.0 + 1e-12)
    throw Error(ErrorKind::Numerical,
                "rank-one bracketing failed: F(|Omega|) = " + std::to_string(f_hi) + " > 1");
  while (hi - lo > 1e-10) {
    const double mid = 0.5 * (lo + hi);
    const IntegralResult fm = F(mid, a);
    ++out.bisection_steps;
    if (fm.divergent || fm.value > 1.0) lo = mid;
    else hi = mid;
  }
  const double root = 0.5 * (lo + hi);
  out.root = root;
  out.verdict = RankOneVerdict::Eigenpair;
  out.profile = [a, root](double x) { return 1.0 / (root - a(x)); };
  return out;
}

ConcentrationTable concentration_study(const Kernel& kernel, const std::vector<int>& counts,
                                       const std::string& profile_expr) {
  if (counts.size() < 3)
    throw Error(ErrorKind::InvalidParameter, "concentration study needs >= 3 refinement levels");
  for (std::size_t k = 1; k < counts.size(); ++k)
    if (counts[k] <= counts[k - 1])
      throw Error(ErrorKind::InvalidParameter, "refinement counts must be ascending");
  const double eps_max = std::sqrt(5.0) / 2.0 - 1.0;
  for (int k = 0; k <= 2000; ++k) {
    const double z = -0.2 + 0.4 * k / 2000.0;
    if (!(std::abs(kernel.profile(z) - 1.0) < eps_max))
      throw Error(ErrorKind::InvalidKernel,
                  "kernel '" + kernel.id() + "' violates |J - 1| < sqrt(5)/2 - 1 on [-1/5, 1/5]");
  }
  const std::vector<double> b = {2.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0, 2.0 / 3.0};
  const MatrixField system_field = MatrixField::scalar_times(profile_expr, 2, b);
  const MatrixField scalar_field = MatrixField::scalar(profile_expr);

  ConcentrationTable table;
  table.concentration = true;
  table.reduction_consistent = true;
  for (int n : counts) {
    const Grid grid = build_grid_1d(0.0, 0.2, n);
    const AssembledOperator op = assemble_K({1.0, 1.0}, {kernel, kernel}, system_field, grid);
    const EigenReport eig = principal_eigenpair(op);
    const AssembledOperator red = assemble_K({1.0}, {kernel}, scalar_field, grid);
    const EigenReport eig_red = principal_eigenpair(red);
    ConcentrationRow row;
    row.n = n;
    row.lambda_p = eig.lambda_p;
    row.residual = eig.residual;
    row.scalar_lambda_p = eig_red.lambda_p;
    double mx = 0.0, total = 0.0;
    for (std::size_t p = 0; p < grid.size(); ++p) {
      const double s = eig.eigenvector[p] + eig.eigenvector[grid.size() + p];
      mx = std::max(mx, s);
      total += s;
    }
    row.ratio = mx / (grid.weight * total);
    if (std::abs(row.lambda_p - row.scalar_lambda_p) > 1e-8) table.reduction_consistent = false;
    if (!table.rows.empty()) {
      const double prev = table.rows.back().ratio;
      if (!(row.ratio > prev) || row.ratio / prev < 1.2) table.concentration = false;
    }
    table.rows.push_back(row);
  }
  const auto& r = table.rows;
  table.last_ratio_change = r.back().ratio / r[r.size() - 2].ratio;
  return table;
}

}  // namespace nls
