#include "nls/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "nls/errors.hpp"

namespace nls {

const char* to_string(EigenMethod m) noexcept {
  switch (m) {
    case EigenMethod::PowerShift: return "power_shift";
    case EigenMethod::JacobiFull: return "jacobi_full";
    case EigenMethod::ShiftInvert: return "shift_invert";
  }
  return "power_shift";
}

namespace {

constexpr std::size_t kJacobiCapacity = 600;

void normalize2(std::vector<double>& x) {
  const double nrm = norm2(x);
  for (double& v : x) v /= nrm;
}

// ||K x - rho x||_inf for a 2-unit x, and the 2-norm of the same vector.
struct Resid {
  double inf = 0.0;
  double two = 0.0;
};

Resid residual_of(std::span<const double> kx, std::span<const double> x, double rho) {
  Resid r;
  double s2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double v = kx[i] - rho * x[i];
    r.inf = std::max(r.inf, std::abs(v));
    s2 += v * v;
  }
  r.two = std::sqrt(s2);
  return r;
}

EigenReport finish(const AssembledOperator& op, std::vector<double> x, int iterations,
                   EigenMethod method) {
  const double w = op.grid.weight;
  normalize2(x);
  std::size_t big = 0;
  for (std::size_t k = 1; k < x.size(); ++k)
    if (std::abs(x[k]) > std::abs(x[big])) big = k;
  const double sign = x[big] < 0.0 ? -1.0 : 1.0;
  const double scale = sign / std::sqrt(w);
  for (double& v : x) v *= scale;
  const BlockVector kx = op.apply(x);
  EigenReport rep;
  rep.lambda_p = -dot(kx, x) / dot(x, x);
  double res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) res = std::max(res, std::abs(kx[i] + rep.lambda_p * x[i]));
  rep.residual = res;
  rep.positivity_margin = *std::min_element(x.begin(), x.end());
  rep.iterations = iterations;
  rep.method = method;
  rep.eigenvector = std::move(x);
  return rep;
}

EigenReport jacobi_path(const AssembledOperator& op, int iterations) {
  SymmetricEigen eig = jacobi_eigen(op.to_dense(), true);
  return finish(op, std::move(eig.vectors.front()), iterations + eig.sweeps, EigenMethod::JacobiFull);
}

// Inverse iteration on (s I - K) with s above lambda_1. A Cholesky factorization
// succeeds exactly when s > lambda_1, and the Rayleigh quotient never exceeds
// lambda_1, so [rho, s] brackets it and each re-shift moves s into that bracket.
bool shift_invert_path(const AssembledOperator& op, std::vector<double>& x, double rho,
                       double resid2, double target, double norm_k, int& iterations) {
  const std::size_t size = op.size();
  const DenseMatrix k = op.to_dense();
  const double floor = 1e-12 * (1.0 + norm_k);
  auto factor = [&](double s) {
    DenseMatrix a(size);
    for (std::size_t i = 0; i < size; ++i) {
      auto dst = a.row(i);
      const auto src = k.row(i);
      for (std::size_t j = 0; j < size; ++j) dst[j] = -src[j];
      dst[i] += s;
    }
    return std::make_unique<CholeskyFactorization>(std::move(a));
  };

  double delta = 10.0 * resid2 + 1e-10 * (1.0 + norm_k);
  std::unique_ptr<CholeskyFactorization> chol;
  double s_ok = rho;
  for (int attempt = 0; attempt < 40; ++attempt) {
    chol = factor(rho + delta);
    if (chol->ok()) break;
    delta *= 10.0;
  }
  if (!chol->ok()) return false;
  s_ok = rho + delta;

  for (int refactor = 0; refactor < 16; ++refactor) {
    double last = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 60; ++it) {
      x = chol->solve(x);
      normalize2(x);
      ++iterations;
      const BlockVector kx = op.apply(x);
      rho = dot(kx, x);
      const Resid r = residual_of(kx, x, rho);
      if (r.inf <= target) return true;
      if (it >= 2 && r.two > 0.5 * last) break;
      last = r.two;
    }
    const double bracket = s_ok - rho;
    if (!(bracket > floor)) continue;
    for (double theta : {0.05, 0.25, 0.6}) {
      const double s = rho + std::max(theta * bracket, floor);
      auto next = factor(s);
      if (next->ok()) {
        chol = std::move(next);
        s_ok = s;
        break;
      }
    }
  }
  return false;
}

}  // namespace

EigenReport principal_eigenpair(const AssembledOperator& op, double tol, int max_iter) {
  if (!(tol >= 1e-13)) throw Error(ErrorKind::InvalidParameter, "eigen tolerance must be >= 1e-13");
  const std::size_t size = op.size();
  if (size == 0) throw Error(ErrorKind::Shape, "empty operator");
  if (max_iter <= 0) max_iter = static_cast<int>(std::min<std::size_t>(200 * size, 2000000000));
  const double w = op.grid.weight;
  const double norm_k = op.inf_norm();
  const double shift = 1.0 + norm_k;
  // residual of the E-normalized vector is the 2-unit residual divided by sqrt(w)
  const double target = tol * (1.0 + norm_k) * std::sqrt(w);

  std::vector<double> x(size, 1.0);
  normalize2(x);
  BlockVector kx = op.apply(x);
  double rho = dot(kx, x);
  Resid res = residual_of(kx, x, rho);

  const double fallback_cost =
      size <= kJacobiCapacity ? 20.0 * static_cast<double>(size) : static_cast<double>(size) / 3.0 + 60.0;
  constexpr int kWindow = 50;
  double checkpoint = res.inf;
  std::vector<double> best = x;
  double best_res = res.inf;
  double best_rho = rho;

  int it = 0;
  bool stalled = false;
  while (res.inf > target) {
    if (it >= max_iter) {
      stalled = true;
      break;
    }
    for (std::size_t i = 0; i < size; ++i) x[i] = kx[i] + shift * x[i];
    normalize2(x);
    op.apply(x, kx);
    rho = dot(kx, x);
    res = residual_of(kx, x, rho);
    ++it;
    if (res.inf < best_res) {
      best_res = res.inf;
      best = x;
      best_rho = rho;
    }
    if (it % kWindow == 0 && it >= 2 * kWindow) {
      const double rate = std::pow(res.inf / checkpoint, 1.0 / kWindow);
      checkpoint = res.inf;
      const double remaining =
          rate < 1.0 ? std::log(target / res.inf) / std::log(rate) : std::numeric_limits<double>::infinity();
      if (remaining > fallback_cost) {
        stalled = true;
        break;
      }
    } else if (it % kWindow == 0) {
      checkpoint = res.inf;
    }
  }
  if (!stalled) return finish(op, std::move(x), it, EigenMethod::PowerShift);

  if (size <= kJacobiCapacity) return jacobi_path(op, it);
  std::vector<double> y = best;
  if (shift_invert_path(op, y, best_rho, best_res * std::sqrt(static_cast<double>(size)), target,
                        norm_k, it))
    return finish(op, std::move(y), it, EigenMethod::ShiftInvert);
  std::vector<double> phi = best;
  for (double& v : phi) v /= std::sqrt(w);
  throw ConvergenceError("principal eigenpair did not converge", -best_rho, std::move(phi),
                         best_res / std::sqrt(w));
}

std::vector<double> full_spectrum_small(const DenseMatrix& k) {
  if (k.size() > kJacobiCapacity)
    throw Error(ErrorKind::Capacity, "full spectrum limited to size <= 600");
  return jacobi_eigen(k, false).values;
}

std::vector<double> full_spectrum_small(const AssembledOperator& op) {
  if (op.size() > kJacobiCapacity)
    throw Error(ErrorKind::Capacity, "full spectrum limited to size <= 600");
  return full_spectrum_small(op.to_dense());
}

double rayleigh(const AssembledOperator& op, std::span<const double> phi) {
  if (phi.size() != op.size()) throw Error(ErrorKind::Shape, "vector length does not match operator");
  const double nn = dot(phi, phi);
  if (!(nn > 0.0)) throw Error(ErrorKind::InvalidInput, "Rayleigh quotient of the zero vector");
  const BlockVector k = op.apply(phi);
  return dot(k, phi) / nn;
}

double e_norm(const AssembledOperator& op, std::span<const double> phi) {
  return std::sqrt(op.grid.weight * dot(phi, phi));
}

namespace {

BlockVector slack_of(const AssembledOperator& op, double lambda, std::span<const double> phi) {
  if (phi.size() != op.size()) throw Error(ErrorKind::Shape, "vector length does not match operator");
  BlockVector s = op.apply(phi);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += lambda * phi[i];
  return s;
}

}  // namespace

TestPairCertificate verify_test_pair_lower(const AssembledOperator& op, double lambda,
                                           std::span<const double> phi, double tol) {
  if (phi.size() != op.size()) throw Error(ErrorKind::Shape, "vector length does not match operator");
  const double mn = *std::min_element(phi.begin(), phi.end());
  if (!(mn >= 1e-12))
    throw Error(ErrorKind::Precondition, "lower test pair needs a strictly positive vector");
  TestPairCertificate c;
  c.lambda = lambda;
  c.direction = PairDirection::Lower;
  c.tolerance = tol;
  c.slack = slack_of(op, lambda, phi);
  const double mx = *std::max_element(c.slack.begin(), c.slack.end());
  c.max_violation = std::max(0.0, mx);
  c.pass = mx <= tol;
  c.kappa = 1.0 / mn;
  c.certified_bound = lambda - c.max_violation * c.kappa;
  return c;
}

TestPairCertificate verify_test_pair_upper(const AssembledOperator& op, double lambda,
                                           std::span<const double> phi, double tol) {
  if (phi.size() != op.size()) throw Error(ErrorKind::Shape, "vector length does not match operator");
  double sum = 0.0, sum2 = 0.0;
  for (double v : phi) {
    if (v < 0.0) throw Error(ErrorKind::Precondition, "upper test pair needs a nonnegative vector");
    sum += v;
    sum2 += v * v;
  }
  if (!(sum2 > 0.0)) throw Error(ErrorKind::Precondition, "upper test pair needs a nonzero vector");
  TestPairCertificate c;
  c.lambda = lambda;
  c.direction = PairDirection::Upper;
  c.tolerance = tol;
  c.slack = slack_of(op, lambda, phi);
  const double mn = *std::min_element(c.slack.begin(), c.slack.end());
  c.max_violation = std::max(0.0, -mn);
  c.pass = mn >= -tol;
  // <K phi, phi> >= -(lambda |phi|^2 + v sum phi) and lambda_p = -max Rayleigh
  c.kappa = sum / sum2;
  c.certified_bound = lambda + c.max_violation * c.kappa;
  return c;
}

TestPairCertificate constant_upper_certificate(const AssembledOperator& op, double tol) {
  const std::size_t n = op.nodes;
  const EigenSelection sel = top_eigen_selection(op.field, op.grid);
  double lambda = -std::numeric_limits<double>::infinity();
  BlockVector phi(op.size());
  for (std::size_t i = 0; i < op.species; ++i)
    for (std::size_t p = 0; p < n; ++p) {
      lambda = std::max(lambda, op.rates[i] * (1.0 - op.mass[i][p]) - sel.lambda1[p]);
      phi[i * n + p] = std::max(0.0, sel.vectors[p][i]);
    }
  return verify_test_pair_upper(op, lambda, phi, tol);
}

TestPairCertificate well_definedness_certificate(const AssembledOperator& op, double tol) {
  const std::size_t n = op.nodes;
  const std::size_t nsp = op.species;
  double amax = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const SmallMatrix a = op.field(op.grid.nodes[p]);
    for (double v : a) amax = std::max(amax, std::abs(v));
  }
  double kmax = 0.0;
  for (std::size_t i = 0; i < nsp; ++i)
    for (double k : op.mass[i]) kmax = std::max(kmax, op.rates[i] * k);
  const double lambda = -(static_cast<double>(nsp) * amax + kmax);
  const BlockVector ones(op.size(), 1.0);
  return verify_test_pair_lower(op, lambda, ones, tol);
}

TripleReport lambda_triple_consistency(const AssembledOperator& op) {
  const EigenReport eig = principal_eigenpair(op);
  TripleReport rep;
  const auto& phi = eig.eigenvector;
  rep.lambda_v = -rayleigh(op, phi);
  const BlockVector s = slack_of(op, rep.lambda_v, phi);
  double r = 0.0;
  for (double v : s) r = std::max(r, std::abs(v));
  r = std::max(r, 1e-14 * (1.0 + op.inf_norm()));
  rep.residual = r;
  rep.lower_lambda = rep.lambda_v - 10.0 * r;
  rep.upper_lambda = rep.lambda_v + 10.0 * r;
  if (eig.positivity_margin < 1e-12) {
    rep.pass = false;
    return rep;
  }
  const TestPairCertificate lo = verify_test_pair_lower(op, rep.lower_lambda, phi, r);
  const TestPairCertificate up = verify_test_pair_upper(op, rep.upper_lambda, phi, r);
  rep.lower_pass = lo.pass;
  rep.upper_pass = up.pass;
  rep.certified_lower = lo.certified_bound;
  rep.certified_upper = up.certified_bound;
  rep.gap = rep.certified_upper - rep.certified_lower;
  rep.pass = lo.pass && up.pass && rep.certified_lower <= rep.lambda_v &&
             rep.lambda_v <= rep.certified_upper && rep.lambda_v - rep.certified_lower <= 100.0 * r &&
             rep.certified_upper - rep.lambda_v <= 100.0 * r;
  return rep;
}

InversePositivityReport inverse_positivity_check(const AssembledOperator& op, int samples) {
  if (samples < 1) throw Error(ErrorKind::InvalidParameter, "samples must be >= 1");
  InversePositivityReport rep;
  rep.lambda_p = principal_eigenpair(op).lambda_p;
  if (!(rep.lambda_p > 1e-8))
    throw Error(ErrorKind::Inapplicable,
                "maximum principle needs lambda_p > 1e-8; got " + std::to_string(rep.lambda_p));
  const std::size_t size = op.size();
  DenseMatrix a = op.to_dense();
  for (std::size_t i = 0; i < size; ++i)
    for (double& v : a.row(i)) v = -v;
  const LuFactorization lu(std::move(a));
  for (int k = 0; k < samples; ++k) {
    const std::size_t j =
        samples == 1 ? 0
                     : static_cast<std::size_t>(std::llround(static_cast<double>(k) * (size - 1) / (samples - 1)));
    if (!rep.columns.empty() && rep.columns.back() == j) continue;
    rep.columns.push_back(j);
  }
  rep.min_entry = std::numeric_limits<double>::infinity();
  std::vector<double> e(size, 0.0);
  for (std::size_t j : rep.columns) {
    e[j] = 1.0;
    const auto col = lu.solve(e);
    e[j] = 0.0;
    for (double v : col) rep.min_entry = std::min(rep.min_entry, v);
  }
  rep.pass = rep.min_entry >= -1e-10;
  return rep;
}

}  // namespace nls
