#pragma once

#include <string>
#include <utility>
#include <vector>

#include "nls/matfield.hpp"
#include "nls/operator.hpp"
#include "nls/spectra.hpp"

namespace nls {

struct Setup {
  Grid grid;
  std::vector<Kernel> kernels;
  MatrixField field;
  // rate path direction for dispersal sweeps: rates = d * direction (default all ones)
  std::vector<double> direction;
};

struct Check {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double bound = 0.0;
};

struct SweepResult {
  std::vector<double> parameters;
  std::vector<double> lambda_p;
  std::vector<EigenReport> reports;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, double>> metrics;

  bool pass() const;
};

// Eigen tolerance used by sweeps: keeps ||K phi + lambda phi||_inf <= 1e-9 for
// operators with large norms.
double sweep_tolerance(const AssembledOperator& op);

// lambda^0 = max over species of the top eigenvalue of M_i - I (negative)
double scalar_principal_value(const std::vector<Kernel>& kernels, const Grid& grid);

SweepResult sweep_dispersal(const Setup& setup, const std::vector<double>& d_values);

struct SigmaOptions {
  int bump_k = 10;
};

SweepResult sweep_sigma(const Setup& setup, double m, const std::vector<double>& sigma_values,
                        const SigmaOptions& options = {});

struct InvarianceReport {
  double sigma = 1.0;
  double matrix_gap = 0.0;   // max entrywise |K - K_sigma|
  double lambda_base = 0.0;
  double lambda_scaled = 0.0;
  double lambda_gap = 0.0;
  bool pass = false;         // matrix_gap <= 1e-12 and lambda_gap <= 1e-10
};

InvarianceReport scaling_invariance_check(const Setup& setup, double sigma);
// Variant with a caller-built grid on sigma * Omega; throws InvalidSetup unless its
// nodes are the base nodes multiplied by sigma.
InvarianceReport scaling_invariance_check(const Setup& setup, double sigma, const Grid& scaled_grid);

struct MonotonicityReport {
  double lambda_inner = 0.0;  // on Omega_1
  double lambda_outer = 0.0;  // on Omega_2
  double c0 = 0.0;
  double removed_measure = 0.0;
  double gap = 0.0;           // lambda_inner - lambda_outer
  bool ordered = false;       // lambda_inner >= lambda_outer - 1e-10
  bool within_bound = false;  // gap <= c0 * removed_measure + 1e-10
  bool pass() const { return ordered && within_bound; }
};

// setup.grid covers Omega_2; Omega_1 is given as a box whose nodes must be a subset.
MonotonicityReport domain_monotonicity_check(const Setup& setup, const Box& inner, double sigma,
                                             double m);

struct BumpFunction {
  std::size_t center_index = 0;
  double center = 0.0;
  double radius = 0.0;
  double inner_radius = 0.0;
  double nu = 0.0;
  double level = 0.0;      // nu - 1/k
  BlockVector values;      // species-major, unit E-norm
  double a_form = 0.0;     // weight * sum f^T A f
};

BumpFunction build_bump(const MatrixField& field, const Grid& grid, int k);

struct GradientReport {
  double lhs = 0.0;
  double rhs = 0.0;
  double d2 = 0.0;
  bool pass = false;  // lhs <= 1.05 * rhs
};

GradientReport gradient_inequality_check(const Kernel& kernel, const Grid& grid,
                                         std::span<const double> phi);
// sin(pi (x - a) / (b - a)) on [a, b] = box shrunk by three cells per side, zero outside
std::vector<double> tapered_sine(const Grid& grid);

struct BoundsReport {
  double lambda_v = 0.0;      // of N + A
  double nu = 0.0;
  double k_max = 0.0;
  double lower = 0.0;         // -nu - k_max
  double strict_margin = 0.0; // -nu - lambda_v
  bool lower_ok = false;
  bool strict_ok = false;     // margin > 1e-6
  bool strict_guaranteed = false;
  HypVerdict hypothesis = HypVerdict::Inconclusive;
  bool pass = false;
};

// op must have unit rates and no (or trivial) scaling.
BoundsReport bounds_check(const AssembledOperator& op);

}  // namespace nls
