#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nls {

// Row-major dense square matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  explicit DenseMatrix(std::size_t n, double fill = 0.0)
      : n_(n), data_(n * n, fill) {}

  std::size_t size() const noexcept { return n_; }

  double& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const noexcept {
    return data_[i * n_ + j];
  }

  std::span<double> row(std::size_t i) noexcept { return {data_.data() + i * n_, n_}; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {data_.data() + i * n_, n_};
  }

  std::span<const double> data() const noexcept { return data_; }

  static DenseMatrix identity(std::size_t n);

  // max_{i,j} |a_ij - a_ji| / max(1, max |a_ij|)
  double symmetry_defect() const;
  double inf_norm() const;
  double frobenius_norm() const;

  void multiply(std::span<const double> x, std::span<double> y) const;

 private:
  std::size_t n_ = 0;
  std::vector<double> data_;
};

struct SymmetricEigen {
  std::vector<double> values;                // descending
  std::vector<std::vector<double>> vectors;  // vectors[k] pairs with values[k]; empty if not requested
  int sweeps = 0;
  double off_norm = 0.0;
};

// Cyclic Jacobi rotations until the off-diagonal Frobenius norm drops below
// rel_tol * ||A||_F. Input must be symmetric.
SymmetricEigen jacobi_eigen(const DenseMatrix& a, bool want_vectors, double rel_tol = 1e-12,
                            int max_sweeps = 100);

// PA = LU with partial pivoting, stored in place.
class LuFactorization {
 public:
  explicit LuFactorization(DenseMatrix a);

  std::size_t size() const noexcept { return lu_.size(); }
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  DenseMatrix lu_;
  std::vector<std::size_t> perm_;
};

// A = L L^T. Construction fails (ok() == false) when A is not positive definite.
class CholeskyFactorization {
 public:
  explicit CholeskyFactorization(DenseMatrix a);

  bool ok() const noexcept { return ok_; }
  std::vector<double> solve(std::span<const double> rhs) const;

 private:
  DenseMatrix l_;
  bool ok_ = false;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);
double norm_inf(std::span<const double> a);

}  // namespace nls
