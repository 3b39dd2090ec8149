#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "nls/grid_kernel.hpp"

namespace nls {

// N x N row-major matrix.
using SmallMatrix = std::vector<double>;

class MatrixField {
 public:
  // Writes A(x) into out (size N*N).
  using EvalFn = std::function<void(const std::array<double, 2>& x, double* out)>;

  MatrixField() = default;
  MatrixField(std::string name, std::size_t species, EvalFn eval);

  static MatrixField constant(std::size_t species, const std::vector<double>& matrix);
  // (1 - sqrt x) * [[2/3, 1/3], [1/3, 2/3]]
  static MatrixField counterexample_2sp();
  // (expr) * B for a constant symmetric B, e.g. the contrast field (1 - x) B
  static MatrixField scalar_times(const std::string& expr, std::size_t species,
                                  const std::vector<double>& matrix);
  static MatrixField scalar(const std::string& expr);
  // entries as expressions, row-major; must be symmetric as strings or values
  static MatrixField expressions(std::size_t species, const std::vector<std::string>& entries);
  // B + eps * exp(-|x - x0|^2 / w^2) I
  static MatrixField smooth_bump(std::size_t species, const std::vector<double>& matrix, double eps,
                                 double x0, double width);
  // a_ij(x) = c_ij + b_ij cos(omega_ij x + phase_ij), off-diagonals kept strictly positive
  static MatrixField random(std::size_t species, std::uint64_t seed);

  const std::string& name() const noexcept { return name_; }
  std::size_t species() const noexcept { return n_; }

  SmallMatrix operator()(const std::array<double, 2>& x) const;
  SmallMatrix operator()(double x) const { return (*this)({x, 0.0}); }
  void eval_into(const std::array<double, 2>& x, double* out) const { eval_(x, out); }

  // A(x) + c I
  MatrixField shifted(double c) const;
  // x -> A(x / sigma)
  MatrixField argument_scaled(double sigma) const;

  // Off-diagonal entries strictly positive at every node (strict mode: diagonal too).
  bool cooperative_on(const Grid& grid, bool strict = false) const;

 private:
  std::string name_;
  std::size_t n_ = 0;
  EvalFn eval_;
};

struct PointSpectrum {
  std::array<double, 2> x{0.0, 0.0};
  std::vector<double> eigenvalues;  // descending
  std::vector<double> top_vector;   // unit 2-norm, largest-magnitude entry positive
  double residual = 0.0;
  double lambda_bar() const { return eigenvalues.front(); }
};

PointSpectrum eval_lambda_bar(const MatrixField& field, const std::array<double, 2>& x);
PointSpectrum eval_lambda_bar(const MatrixField& field, double x);

struct SupResult {
  double nu = 0.0;
  std::size_t index = 0;
  std::array<double, 2> x{0.0, 0.0};
};

SupResult sup_lambda_bar(const MatrixField& field, const Grid& grid);

// Top eigenpairs at every node with eigenvector signs aligned node to node
// (positive inner product with the previous node in grid order).
struct EigenSelection {
  std::vector<double> lambda1;
  std::vector<std::vector<double>> vectors;
};
EigenSelection top_eigen_selection(const MatrixField& field, const Grid& grid);

enum class HypVerdict { Holds, Fails, Inconclusive };
const char* to_string(HypVerdict v) noexcept;

struct HypPReport {
  double x0 = 0.0;
  double nu = 0.0;
  double exponent = 0.0;  // NaN when no fit was possible (e.g. constant fields)
  bool constant_field = false;
  std::vector<int> counts;                 // node count per refinement level
  std::vector<double> divergence_trend;    // sum of w / (nu - lambda1)
  HypVerdict verdict = HypVerdict::Inconclusive;
};

HypPReport hypothesis_P_diagnostic(const MatrixField& field, const Grid& grid, int refinements);

}  // namespace nls
