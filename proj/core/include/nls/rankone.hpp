#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nls/grid_kernel.hpp"

namespace nls {

// a(x) <= 0 on an interval, with the points where a vanishes.
class ScalarPotential {
 public:
  ScalarPotential(std::string name, std::function<double(double)> a, double lo, double hi,
                  std::optional<std::vector<double>> zeros = std::nullopt);
  static ScalarPotential from_expression(const std::string& expr, double lo, double hi);

  double operator()(double x) const { return a_(x); }
  const std::string& name() const noexcept { return name_; }
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double length() const noexcept { return hi_ - lo_; }
  const std::vector<double>& zeros() const noexcept { return zeros_; }
  bool identically_zero() const noexcept { return all_zero_; }

 private:
  std::string name_;
  std::function<double(double)> a_;
  double lo_, hi_;
  std::vector<double> zeros_;
  bool all_zero_ = false;
};

struct IntegralResult {
  double value = 0.0;  // +inf when divergent
  double error = 0.0;
  bool divergent = false;
};

// int dx / (-a(x))
IntegralResult improper_integral(const ScalarPotential& a);
// F(lambda) = int dx / (lambda - a(x))
IntegralResult F(double lambda, const ScalarPotential& a);

enum class RankOneVerdict { NoEigenfunction, Eigenpair };
const char* to_string(RankOneVerdict v) noexcept;

struct RankOneResult {
  IntegralResult i0;
  std::optional<double> root;
  RankOneVerdict verdict = RankOneVerdict::NoEigenfunction;
  int bisection_steps = 0;
  // phi(x) = 1 / (root - a(x)); int phi = F(root) = 1
  std::function<double(double)> profile;
};

RankOneResult solve_rank_one(const ScalarPotential& a);

struct ConcentrationRow {
  int n = 0;
  double lambda_p = 0.0;
  double ratio = 0.0;
  double residual = 0.0;
  double scalar_lambda_p = 0.0;  // principal eigenvalue of the scalar reduction
};

struct ConcentrationTable {
  std::vector<ConcentrationRow> rows;
  bool concentration = false;       // R strictly increasing, R(2n)/R(n) >= 1.2
  bool reduction_consistent = false;  // |system - scalar| <= 1e-8 at every level
  double last_ratio_change = 0.0;     // R(last) / R(previous)
};

// Two-species system on [0, 1/5] with d = (1, 1), field s(x) * [[2/3,1/3],[1/3,2/3]]
// where s is given as an expression (default 1 - sqrt(x)).
ConcentrationTable concentration_study(const Kernel& kernel, const std::vector<int>& counts,
                                       const std::string& profile_expr = "1 - sqrt(x)");

}  // namespace nls
