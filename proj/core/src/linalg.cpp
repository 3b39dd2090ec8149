#include "nls/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "nls/errors.hpp"

namespace nls {

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

double DenseMatrix::symmetry_defect() const {
  double scale = 1.0;
  for (double v : data_) scale = std::max(scale, std::abs(v));
  double defect = 0.0;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      defect = std::max(defect, std::abs((*this)(i, j) - (*this)(j, i)));
  return defect / scale;
}

double DenseMatrix::inf_norm() const {
  double best = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (double v : row(i)) s += std::abs(v);
    best = std::max(best, s);
  }
  return best;
}

double DenseMatrix::frobenius_norm() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return std::sqrt(s);
}

void DenseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const double* r = data_.data() + i * n_;
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += r[j] * x[j];
    y[i] = s;
  }
}

namespace {

double off_diagonal_norm(const DenseMatrix& a) {
  double s = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

}  // namespace

SymmetricEigen jacobi_eigen(const DenseMatrix& input, bool want_vectors, double rel_tol,
                            int max_sweeps) {
  const std::size_t n = input.size();
  if (input.symmetry_defect() > 1e-12) {
    throw Error(ErrorKind::Asymmetry, "jacobi_eigen: matrix is not symmetric");
  }
  DenseMatrix a = input;
  // Rows of vt are the columns of the accumulated rotation matrix.
  DenseMatrix vt = want_vectors ? DenseMatrix::identity(n) : DenseMatrix();

  const double target = rel_tol * std::max(input.frobenius_norm(), 1e-300);
  SymmetricEigen out;
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    out.off_norm = off_diagonal_norm(a);
    if (out.off_norm <= target) break;
    ++out.sweeps;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double app = a(p, p);
        const double aqq = a(q, q);
        const double g = 100.0 * std::abs(apq);
        if (sweep > 3 && std::abs(app) + g == std::abs(app) &&
            std::abs(aqq) + g == std::abs(aqq)) {
          a(p, q) = 0.0;
          a(q, p) = 0.0;
          continue;
        }
        const double h = aqq - app;
        double t;
        if (std::abs(h) + g == std::abs(h)) {
          t = apq / h;
        } else {
          const double theta = 0.5 * h / apq;
          t = 1.0 / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        auto rp = a.row(p);
        auto rq = a.row(q);
        for (std::size_t k = 0; k < n; ++k) {
          const double xp = rp[k];
          const double xq = rq[k];
          rp[k] = c * xp - s * xq;
          rq[k] = s * xp + c * xq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          a(k, p) = rp[k];
          a(k, q) = rq[k];
        }
        a(p, p) = app - t * apq;
        a(q, q) = aqq + t * apq;
        a(p, q) = 0.0;
        a(q, p) = 0.0;

        if (want_vectors) {
          auto vp = vt.row(p);
          auto vq = vt.row(q);
          for (std::size_t k = 0; k < n; ++k) {
            const double xp = vp[k];
            const double xq = vq[k];
            vp[k] = c * xp - s * xq;
            vq[k] = s * xp + c * xq;
          }
        }
      }
    }
  }
  out.off_norm = off_diagonal_norm(a);
  if (out.off_norm > target) {
    throw Error(ErrorKind::Convergence, "jacobi_eigen: sweep limit reached");
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  out.values.reserve(n);
  for (std::size_t k : order) out.values.push_back(a(k, k));
  if (want_vectors) {
    out.vectors.reserve(n);
    for (std::size_t k : order) {
      auto r = vt.row(k);
      out.vectors.emplace_back(r.begin(), r.end());
    }
  }
  return out;
}

LuFactorization::LuFactorization(DenseMatrix a) : lu_(std::move(a)), perm_(lu_.size()) {
  const std::size_t n = lu_.size();
  std::iota(perm_.begin(), perm_.end(), 0);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(lu_(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > best) {
        best = std::abs(lu_(i, k));
        piv = i;
      }
    }
    if (best == 0.0) throw Error(ErrorKind::Numerical, "LU: matrix is singular");
    if (piv != k) {
      auto rk = lu_.row(k);
      auto rp = lu_.row(piv);
      std::swap_ranges(rk.begin(), rk.end(), rp.begin());
      std::swap(perm_[k], perm_[piv]);
    }
    const auto rk = lu_.row(k);
    const double inv = 1.0 / rk[k];
    for (std::size_t i = k + 1; i < n; ++i) {
      auto ri = lu_.row(i);
      const double f = ri[k] * inv;
      ri[k] = f;
      if (f == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) ri[j] -= f * rk[j];
    }
  }
}

std::vector<double> LuFactorization::solve(std::span<const double> rhs) const {
  const std::size_t n = lu_.size();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = rhs[perm_[i]];
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = lu_.row(i);
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= r[j] * x[j];
    x[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    const auto r = lu_.row(i);
    double s = x[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= r[j] * x[j];
    x[i] = s / r[i];
  }
  return x;
}

CholeskyFactorization::CholeskyFactorization(DenseMatrix a) : l_(std::move(a)) {
  const std::size_t n = l_.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto ri = l_.row(i);
    for (std::size_t j = 0; j <= i; ++j) {
      const auto rj = l_.row(j);
      double s = ri[j];
      for (std::size_t k = 0; k < j; ++k) s -= ri[k] * rj[k];
      if (i == j) {
        if (!(s > 0.0)) return;
        ri[i] = std::sqrt(s);
      } else {
        ri[j] = s / rj[j];
      }
    }
    for (std::size_t j = i + 1; j < n; ++j) ri[j] = 0.0;
  }
  ok_ = true;
}

std::vector<double> CholeskyFactorization::solve(std::span<const double> rhs) const {
  if (!ok_) throw Error(ErrorKind::Numerical, "Cholesky: factorization failed");
  const std::size_t n = l_.size();
  std::vector<double> y(rhs.begin(), rhs.end());
  for (std::size_t i = 0; i < n; ++i) {
    const auto r = l_.row(i);
    double s = y[i];
    for (std::size_t k = 0; k < i; ++k) s -= r[k] * y[k];
    y[i] = s / r[i];
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = y[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= l_(k, i) * y[k];
    y[i] = s / l_(i, i);
  }
  return y;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidResolution: return "invalid-resolution";
    case ErrorKind::InvalidParameter: return "invalid-parameter";
    case ErrorKind::MissingCutoff: return "missing-cutoff";
    case ErrorKind::Asymmetry: return "asymmetry";
    case ErrorKind::UnsupportedDimension: return "unsupported-dimension";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::NotCooperative: return "not-cooperative";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Capacity: return "capacity";
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Inapplicable: return "inapplicable";
    case ErrorKind::InvalidPotential: return "invalid-potential";
    case ErrorKind::Domain: return "domain";
    case ErrorKind::Numerical: return "numerical";
    case ErrorKind::InvalidSetup: return "invalid-setup";
    case ErrorKind::InvalidKernel: return "invalid-kernel";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

}  // namespace nls
