#pragma once

#include <functional>
#include <span>
#include <vector>

namespace nls {

using ScalarFn = std::function<double(double)>;

// 8-point Gauss-Legendre on [a, b].
double gauss_legendre8(const ScalarFn& f, double a, double b);

// Globally adaptive bisection of 8-point Gauss-Legendre panels; stops when the
// panel-versus-halves difference is below abs_tol + rel_tol * |I|.
double adaptive_gauss(const ScalarFn& f, double a, double b, double abs_tol = 1e-15,
                      double rel_tol = 1e-13, int max_depth = 40);

// Composite 4-point Gauss-Legendre: [a, b] is split at the given breakpoints
// and then into `panels` subintervals allotted proportionally to length.
double composite_gauss(const ScalarFn& f, double a, double b,
                       std::span<const double> breakpoints, int panels);

struct GradedResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool divergent = false;
  int levels = 0;
};

struct GradedOptions {
  int max_levels = 60;
  double divergence_threshold = 1e6;
};

// Integral of f over [lo, hi] where f may blow up (integrably or not) at the
// listed singular points. Panels are refined dyadically toward each singular
// point and the geometric tail is extrapolated (Aitken / Richardson with an
// estimated rate). Divergent integrals come back with divergent = true and
// value = +inf.
GradedResult graded_integral(const ScalarFn& f, double lo, double hi,
                             std::span<const double> singular_points,
                             const GradedOptions& options = {});

}  // namespace nls
