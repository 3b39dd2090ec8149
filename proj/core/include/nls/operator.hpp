#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "nls/grid_kernel.hpp"
#include "nls/linalg.hpp"
#include "nls/matfield.hpp"

namespace nls {

// Species-major block vector: entry (i, p) lives at i * n + p.
using BlockVector = std::vector<double>;

struct Scaling {
  double sigma = 1.0;
  double m = 0.0;
};

// Discrete K: diagonal blocks are dense, coupling blocks are diagonal and kept
// as vectors a_ij(x_p).
struct AssembledOperator {
  std::size_t species = 0;
  std::size_t nodes = 0;
  Grid grid;
  std::vector<Kernel> kernels;
  MatrixField field;
  std::vector<double> rates;
  std::optional<Scaling> scaling;
  std::vector<DenseMatrix> diag_blocks;             // N blocks, n x n
  std::vector<std::vector<double>> coupling;        // index i * N + j, empty when i == j
  std::vector<std::vector<double>> mass;            // k_i(x_p), or p_{sigma,i}(x_p)

  std::size_t size() const noexcept { return species * nodes; }

  void apply(std::span<const double> x, std::span<double> y) const;
  BlockVector apply(std::span<const double> x) const;

  DenseMatrix to_dense() const;
  double inf_norm() const;            // max absolute row sum
  double symmetry_defect() const;     // relative, like DenseMatrix::symmetry_defect

  // K + c I
  AssembledOperator shifted(double c) const;

  // Row-major dense dump with a commented header.
  void write_text(std::ostream& os) const;
};

DenseMatrix assemble_convolution(const Kernel& kernel, const Grid& grid);
std::vector<double> mass_function(const Kernel& kernel, const Grid& grid);

// K = D (N - I) + A. Throws NotCooperative when an off-diagonal entry of the
// field is not strictly positive on some node, unless allow_noncooperative.
AssembledOperator assemble_K(const std::vector<double>& rates, const std::vector<Kernel>& kernels,
                             const MatrixField& field, const Grid& grid,
                             bool allow_noncooperative = false);

// K = sigma^-m (N_sigma - I) + A with kernels scaled by sigma.
AssembledOperator assemble_K_sigma_m(double sigma, double m, const std::vector<Kernel>& kernels,
                                     const MatrixField& field, const Grid& grid,
                                     bool allow_noncooperative = false);

// Smallest node count per axis for which the grid resolves `kernel` scaled by sigma.
std::size_t required_nodes(const Kernel& kernel, double sigma, const Box& box);

BlockVector apply(const AssembledOperator& op, std::span<const double> x);

}  // namespace nls
