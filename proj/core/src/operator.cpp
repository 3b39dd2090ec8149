#include "nls/operator.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "nls/errors.hpp"

namespace nls {

namespace {

std::vector<double> offset_table(const Kernel& kernel, double h, int count) {
  std::vector<double> t(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) t[k] = kernel.profile(k * h);
  return t;
}

void check_kernel_dim(const Kernel& kernel, const Grid& grid) {
  if (kernel.dim() != grid.dim())
    throw Error(ErrorKind::Shape, "kernel dimension does not match the grid");
}

}  // namespace

DenseMatrix assemble_convolution(const Kernel& kernel, const Grid& grid) {
  check_kernel_dim(kernel, grid);
  const std::size_t n = grid.size();
  DenseMatrix m(n);
  const double w = grid.weight;
  // x_p - x_q is an integer multiple of the spacing on each axis, so the kernel
  // is sampled once per offset and M is symmetric by construction.
  if (grid.dim() == 1) {
    const auto t = offset_table(kernel, grid.spacing[0], grid.counts[0]);
    for (std::size_t p = 0; p < n; ++p) {
      auto row = m.row(p);
      for (std::size_t q = 0; q < n; ++q) row[q] = w * t[p > q ? p - q : q - p];
    }
    return m;
  }
  const int n0 = grid.counts[0];
  const int n1 = grid.counts[1];
  const auto t0 = offset_table(kernel, grid.spacing[0], n0);
  const auto t1 = offset_table(kernel, grid.spacing[1], n1);
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n1; ++j) {
      auto row = m.row(static_cast<std::size_t>(i) * n1 + j);
      for (int a = 0; a < n0; ++a) {
        const double v0 = w * t0[std::abs(i - a)];
        for (int b = 0; b < n1; ++b) row[static_cast<std::size_t>(a) * n1 + b] = v0 * t1[std::abs(j - b)];
      }
    }
  return m;
}

std::vector<double> mass_function(const Kernel& kernel, const Grid& grid) {
  const DenseMatrix m = assemble_convolution(kernel, grid);
  std::vector<double> k(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    double s = 0.0;
    for (double v : m.row(p)) s += v;
    k[p] = s;
  }
  return k;
}

namespace {

AssembledOperator assemble_common(const std::vector<double>& rates,
                                  const std::vector<Kernel>& kernels, const MatrixField& field,
                                  const Grid& grid, bool allow_noncooperative,
                                  std::optional<Scaling> scaling) {
  const std::size_t nsp = field.species();
  if (kernels.size() != nsp || rates.size() != nsp)
    throw Error(ErrorKind::Shape, "kernels, rates and field disagree on the number of species");
  for (double d : rates)
    if (!(d >= 0.0) || !std::isfinite(d))
      throw Error(ErrorKind::InvalidParameter, "dispersal rates must be finite and >= 0");
  if (!allow_noncooperative && !field.cooperative_on(grid))
    throw Error(ErrorKind::NotCooperative,
                "field '" + field.name() + "' has a non-positive off-diagonal entry on the grid");

  AssembledOperator op;
  op.species = nsp;
  op.nodes = grid.size();
  op.grid = grid;
  op.kernels = kernels;
  op.field = field;
  op.rates = rates;
  op.scaling = scaling;

  const std::size_t n = grid.size();
  std::vector<double> a(nsp * nsp * n);  // a[(i*N + j) * n + p]
  {
    SmallMatrix buf(nsp * nsp);
    for (std::size_t p = 0; p < n; ++p) {
      field.eval_into(grid.nodes[p], buf.data());
      for (std::size_t k = 0; k < nsp * nsp; ++k) a[k * n + p] = buf[k];
    }
  }

  op.coupling.resize(nsp * nsp);
  for (std::size_t i = 0; i < nsp; ++i)
    for (std::size_t j = 0; j < nsp; ++j) {
      if (i == j) continue;
      // average the mirrored entries so the assembled matrix is exactly symmetric
      std::vector<double> c(n);
      for (std::size_t p = 0; p < n; ++p)
        c[p] = 0.5 * (a[(i * nsp + j) * n + p] + a[(j * nsp + i) * n + p]);
      op.coupling[i * nsp + j] = std::move(c);
    }

  for (std::size_t i = 0; i < nsp; ++i) {
    check_kernel_dim(kernels[i], grid);
    DenseMatrix m = assemble_convolution(kernels[i], grid);
    std::vector<double> k(n);
    const double d = rates[i];
    for (std::size_t p = 0; p < n; ++p) {
      auto row = m.row(p);
      double s = 0.0;
      for (std::size_t q = 0; q < n; ++q) {
        s += row[q];
        row[q] *= d;
      }
      k[p] = s;
      row[p] += -d + a[(i * nsp + i) * n + p];
    }
    op.mass.push_back(std::move(k));
    op.diag_blocks.push_back(std::move(m));
  }
  return op;
}

}  // namespace

AssembledOperator assemble_K(const std::vector<double>& rates, const std::vector<Kernel>& kernels,
                             const MatrixField& field, const Grid& grid,
                             bool allow_noncooperative) {
  return assemble_common(rates, kernels, field, grid, allow_noncooperative, std::nullopt);
}

std::size_t required_nodes(const Kernel& kernel, double sigma, const Box& box) {
  const auto r = kernel.support_radius();
  if (!r)
    throw Error(ErrorKind::MissingCutoff, "kernel '" + kernel.id() + "' has no support radius");
  double longest = 0.0;
  for (int k = 0; k < box.dim; ++k) longest = std::max(longest, box.hi[k] - box.lo[k]);
  const double need = longest * 8.0 / (sigma * *r);
  return static_cast<std::size_t>(std::ceil(need * (1.0 - 1e-12)));
}

AssembledOperator assemble_K_sigma_m(double sigma, double m, const std::vector<Kernel>& kernels,
                                     const MatrixField& field, const Grid& grid,
                                     bool allow_noncooperative) {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorKind::InvalidParameter, "sigma must be positive");
  if (!(m >= 0.0 && m <= 2.0)) throw Error(ErrorKind::InvalidParameter, "m must lie in [0, 2]");
  std::vector<Kernel> scaled;
  for (const auto& k : kernels) {
    const auto r = k.support_radius();
    if (!r)
      throw Error(ErrorKind::MissingCutoff, "kernel '" + k.id() + "' has no support radius");
    for (int axis = 0; axis < grid.dim(); ++axis) {
      if (grid.spacing[axis] > sigma * *r / 8.0 * (1.0 + 1e-12)) {
        const std::size_t need = required_nodes(k, sigma, grid.box);
        throw ResolutionError("grid does not resolve kernel '" + k.id() + "' at sigma = " +
                                  std::to_string(sigma) + "; need at least " +
                                  std::to_string(need) + " nodes per axis",
                              need);
      }
    }
    scaled.push_back(k.scaled(sigma));
  }
  const double rate = std::pow(sigma, -m);
  std::vector<double> rates(field.species(), rate);
  return assemble_common(rates, scaled, field, grid, allow_noncooperative, Scaling{sigma, m});
}

void AssembledOperator::apply(std::span<const double> x, std::span<double> y) const {
  const std::size_t n = nodes;
  if (x.size() != size() || y.size() != size())
    throw Error(ErrorKind::Shape, "block vector length does not match the operator");
  for (std::size_t i = 0; i < species; ++i) {
    diag_blocks[i].multiply(x.subspan(i * n, n), y.subspan(i * n, n));
    for (std::size_t j = 0; j < species; ++j) {
      if (i == j) continue;
      const auto& c = coupling[i * species + j];
      for (std::size_t p = 0; p < n; ++p) y[i * n + p] += c[p] * x[j * n + p];
    }
  }
}

BlockVector AssembledOperator::apply(std::span<const double> x) const {
  BlockVector y(size());
  apply(x, y);
  return y;
}

BlockVector apply(const AssembledOperator& op, std::span<const double> x) { return op.apply(x); }

DenseMatrix AssembledOperator::to_dense() const {
  const std::size_t n = nodes;
  DenseMatrix k(size());
  for (std::size_t i = 0; i < species; ++i) {
    for (std::size_t p = 0; p < n; ++p) {
      const auto src = diag_blocks[i].row(p);
      auto dst = k.row(i * n + p);
      std::copy(src.begin(), src.end(), dst.begin() + static_cast<std::ptrdiff_t>(i * n));
      for (std::size_t j = 0; j < species; ++j)
        if (j != i) dst[j * n + p] = coupling[i * species + j][p];
    }
  }
  return k;
}

double AssembledOperator::inf_norm() const {
  const std::size_t n = nodes;
  double best = 0.0;
  for (std::size_t i = 0; i < species; ++i)
    for (std::size_t p = 0; p < n; ++p) {
      double s = 0.0;
      for (double v : diag_blocks[i].row(p)) s += std::abs(v);
      for (std::size_t j = 0; j < species; ++j)
        if (j != i) s += std::abs(coupling[i * species + j][p]);
      best = std::max(best, s);
    }
  return best;
}

double AssembledOperator::symmetry_defect() const { return to_dense().symmetry_defect(); }

AssembledOperator AssembledOperator::shifted(double c) const {
  AssembledOperator op = *this;
  for (auto& b : op.diag_blocks)
    for (std::size_t p = 0; p < nodes; ++p) b(p, p) += c;
  op.field = field.shifted(c);
  return op;
}

void AssembledOperator::write_text(std::ostream& os) const {
  os << "# nls operator dump\n";
  os << "# size " << size() << " species " << species << " nodes " << nodes << "\n";
  os << "# row-major; row/column index = species * nodes + node\n";
  const DenseMatrix k = to_dense();
  char buf[32];
  for (std::size_t r = 0; r < k.size(); ++r) {
    const auto row = k.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.16e", row[c]);
      if (c) os << ' ';
      os << buf;
    }
    os << '\n';
  }
}

}  // namespace nls
