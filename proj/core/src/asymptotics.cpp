#include "nls/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nls/errors.hpp"

namespace nls {

bool SweepResult::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double sweep_tolerance(const AssembledOperator& op) {
  return std::max(1e-13, std::min(1e-11, 1e-10 / (1.0 + op.inf_norm())));
}

namespace {

EigenReport solve(const AssembledOperator& op) { return principal_eigenpair(op, sweep_tolerance(op)); }

void require_sorted(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw Error(ErrorKind::InvalidInput, std::string(what) + " must not be empty");
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!(v[k] > 0.0) || !std::isfinite(v[k]))
      throw Error(ErrorKind::InvalidInput, std::string(what) + " must be positive");
    if (k > 0 && !(v[k] > v[k - 1]))
      throw Error(ErrorKind::InvalidInput, std::string(what) + " must be sorted ascending");
  }
}

std::vector<double> direction_of(const Setup& s) {
  if (s.direction.empty()) return std::vector<double>(s.field.species(), 1.0);
  if (s.direction.size() != s.field.species())
    throw Error(ErrorKind::Shape, "rate direction length does not match the species count");
  for (double v : s.direction)
    if (!(v > 0.0)) throw Error(ErrorKind::InvalidInput, "rate direction entries must be positive");
  return s.direction;
}

Check make_check(std::string name, bool pass, double measured, double bound) {
  return Check{std::move(name), pass, measured, bound};
}

// Principal eigenvector of M - I for one kernel, normalized to sup 1.
std::pair<double, std::vector<double>> scalar_pair(const Kernel& kernel, const Grid& grid) {
  const MatrixField zero = MatrixField::constant(1, {0.0});
  const AssembledOperator op = assemble_K({1.0}, {kernel}, zero, grid);
  const EigenReport r = solve(op);
  std::vector<double> psi = r.eigenvector;
  const double mx = *std::max_element(psi.begin(), psi.end());
  for (double& v : psi) v /= mx;
  return {-r.lambda_p, psi};
}

}  // namespace

double scalar_principal_value(const std::vector<Kernel>& kernels, const Grid& grid) {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& k : kernels) best = std::max(best, scalar_pair(k, grid).first);
  return best;
}

SweepResult sweep_dispersal(const Setup& setup, const std::vector<double>& d_values) {
  require_sorted(d_values, "d values");
  const std::vector<double> dir = direction_of(setup);
  const std::size_t nsp = setup.field.species();
  const std::size_t n = setup.grid.size();
  SweepResult out;
  for (double d : d_values) {
    std::vector<double> rates(nsp);
    for (std::size_t i = 0; i < nsp; ++i) rates[i] = d * dir[i];
    const AssembledOperator op = assemble_K(rates, setup.kernels, setup.field, setup.grid);
    EigenReport r = solve(op);
    out.parameters.push_back(d);
    out.lambda_p.push_back(r.lambda_p);
    out.reports.push_back(std::move(r));
  }
  const auto& lam = out.lambda_p;

  double worst_drop = 0.0;
  for (std::size_t k = 1; k < lam.size(); ++k) worst_drop = std::max(worst_drop, lam[k - 1] - lam[k]);
  out.checks.push_back(make_check("monotone_in_d", worst_drop <= 1e-10, worst_drop, 1e-10));

  double max_res = 0.0;
  for (const auto& r : out.reports) max_res = std::max(max_res, r.residual);
  out.checks.push_back(make_check("eigen_residual", max_res <= 1e-9, max_res, 1e-9));

  const double nu = sup_lambda_bar(setup.field, setup.grid).nu;
  out.metrics.push_back({"nu", nu});
  if (lam.size() >= 2) {
    const double r0 = std::abs(lam[0] + nu) / d_values[0];
    const double r1 = std::abs(lam[1] + nu) / d_values[1];
    const double spread = std::max(r0, r1) / std::max(std::min(r0, r1), 1e-300);
    out.metrics.push_back({"small_d_ratio_0", r0});
    out.metrics.push_back({"small_d_ratio_1", r1});
    out.checks.push_back(make_check("small_d_linear_rate", spread <= 2.0, spread, 2.0));
  }

  // Large d: lambda_p >= -d lambda0 - C_A from the test pair (psi, -d lambda0 - C_A),
  // psi_i the principal vector of M_i - I normalized to sup 1.
  double lambda0 = -std::numeric_limits<double>::infinity();
  std::vector<std::vector<double>> psi;
  for (const auto& k : setup.kernels) {
    auto [mu, v] = scalar_pair(k, setup.grid);
    lambda0 = std::max(lambda0, mu);
    psi.push_back(std::move(v));
  }
  double c_a = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const SmallMatrix a = setup.field(setup.grid.nodes[p]);
    double amax = 0.0;
    for (double v : a) amax = std::max(amax, std::abs(v));
    double pmax = 0.0, pmin = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < nsp; ++i) {
      pmax = std::max(pmax, psi[i][p]);
      pmin = std::min(pmin, psi[i][p]);
    }
    c_a = std::max(c_a, static_cast<double>(nsp) * amax * pmax / pmin);
  }
  out.metrics.push_back({"lambda0", lambda0});
  out.metrics.push_back({"C_A", c_a});
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < lam.size(); ++k) {
    const double dmin = d_values[k] * *std::min_element(dir.begin(), dir.end());
    worst = std::min(worst, lam[k] - (-dmin * lambda0 - c_a));
  }
  out.checks.push_back(make_check("large_d_lower_bound", worst >= -1e-9, worst, 0.0));
  // the rate is only meaningful once diffusion dominates the reaction bound
  const double d_last = d_values.back() * *std::min_element(dir.begin(), dir.end());
  if (d_last * std::abs(lambda0) >= 20.0 * c_a) {
    const double rel = std::abs(lam.back() / d_last + lambda0) / std::abs(lambda0);
    out.checks.push_back(make_check("large_d_rate", rel <= 0.05, rel, 0.05));
  }
  return out;
}

namespace {

// Discrete ||phi'||^2 with central differences and zero extension.
double gradient_norm2(std::span<const double> phi, double h, double w) {
  const std::size_t n = phi.size();
  double s = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double left = p > 0 ? phi[p - 1] : 0.0;
    const double right = p + 1 < n ? phi[p + 1] : 0.0;
    const double g = (right - left) / (2.0 * h);
    s += g * g;
  }
  return w * s;
}

}  // namespace

SweepResult sweep_sigma(const Setup& setup, double m, const std::vector<double>& sigma_values,
                        const SigmaOptions& options) {
  require_sorted(sigma_values, "sigma values");
  if (!(m >= 0.0 && m <= 2.0)) throw Error(ErrorKind::InvalidParameter, "m must lie in [0, 2]");
  const std::size_t nsp = setup.field.species();
  const std::size_t n = setup.grid.size();
  const double w = setup.grid.weight;
  SweepResult out;
  std::vector<AssembledOperator> ops;
  for (double sigma : sigma_values) {
    AssembledOperator op = assemble_K_sigma_m(sigma, m, setup.kernels, setup.field, setup.grid);
    EigenReport r = solve(op);
    out.parameters.push_back(sigma);
    out.lambda_p.push_back(r.lambda_p);
    out.reports.push_back(std::move(r));
    ops.push_back(std::move(op));
  }
  const auto& lam = out.lambda_p;
  const std::size_t last = lam.size() - 1;
  const double nu = sup_lambda_bar(setup.field, setup.grid).nu;
  out.metrics.push_back({"nu", nu});
  std::vector<double> gap(lam.size());
  for (std::size_t k = 0; k < lam.size(); ++k) gap[k] = std::abs(lam[k] + nu);

  double max_res = 0.0;
  for (const auto& r : out.reports) max_res = std::max(max_res, r.residual);
  out.checks.push_back(make_check("eigen_residual", max_res <= 1e-9, max_res, 1e-9));

  double lower_violation = 0.0;
  for (double l : lam) lower_violation = std::max(lower_violation, -nu - l);
  out.checks.push_back(make_check("lower_bound_minus_nu", lower_violation <= 1e-10, lower_violation, 1e-10));

  if (m > 0.0 && m < 2.0) {
    const BumpFunction bump = build_bump(setup.field, setup.grid, options.bump_k);
    out.metrics.push_back({"bump_a_form", bump.a_form});
    // sigma^(2-m) * 1/2 D2 |f'|^2 + sigma^-m <(1 - p_sigma) f, f> + nu - A(f)
    auto small_bound = [&](std::size_t k) {
      const double sigma = sigma_values[k];
      double b = nu - bump.a_form;
      for (std::size_t i = 0; i < nsp; ++i) {
        const std::span<const double> f(bump.values.data() + i * n, n);
        const double d2 = second_moment(setup.kernels[i], 4096).value;
        b += std::pow(sigma, 2.0 - m) * 0.5 * d2 * gradient_norm2(f, setup.grid.spacing[0], w);
        double deficit = 0.0;
        for (std::size_t p = 0; p < n; ++p) deficit += (1.0 - ops[k].mass[i][p]) * f[p] * f[p];
        b += std::pow(sigma, -m) * w * deficit;
      }
      return b;
    };
    const double b0 = small_bound(0);
    out.metrics.push_back({"small_sigma_bound", b0});
    out.checks.push_back(make_check("small_sigma_rate", gap[0] <= 1.05 * b0 + 1e-9, gap[0], 1.05 * b0 + 1e-9));
    const double bl = std::pow(sigma_values[last], -m);
    out.checks.push_back(make_check("large_sigma_rate", gap[last] <= bl + 1e-9, gap[last], bl + 1e-9));
    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < lam.size(); ++k) {
      const double b = 1.05 * std::max(small_bound(k), std::pow(sigma_values[k], -m)) + 1e-9;
      worst = std::max(worst, gap[k] - b);
    }
    out.checks.push_back(make_check("pointwise_bound", worst <= 0.0, worst, 0.0));
    if (lam.size() >= 3) {
      out.checks.push_back(make_check("small_sigma_tail_monotone", gap[0] <= gap[1], gap[0], gap[1]));
      out.checks.push_back(
          make_check("large_sigma_tail_monotone", gap[last] <= gap[last - 1], gap[last], gap[last - 1]));
    }
  } else if (m == 0.0) {
    if (lam.size() >= 2)
      out.checks.push_back(make_check("small_sigma_tail_monotone", gap[0] <= gap[1], gap[0], gap[1]));
    double jinf = 0.0;
    for (const auto& k : setup.kernels) jinf = std::max(jinf, k.sup_norm());
    const int dim = setup.grid.dim();
    std::array<int, 2> fine_counts{2 * setup.grid.counts[0], 2 * setup.grid.counts[1]};
    const Grid fine = build_grid(setup.grid.box, std::span<const int>(fine_counts.data(), dim));
    const std::size_t first_tail = lam.size() >= 2 ? last - 1 : last;
    for (std::size_t k = first_tail; k <= last; ++k) {
      const double sigma = sigma_values[k];
      const AssembledOperator op2 = assemble_K_sigma_m(sigma, 0.0, setup.kernels, setup.field, fine);
      const double delta = std::abs(lam[k] - solve(op2).lambda_p);
      const double lo = 1.0 - nu - std::sqrt(jinf) / std::pow(sigma, dim / 2.0) - delta;
      const double hi = 1.0 - nu + delta;
      out.metrics.push_back({"delta_quad_sigma_" + std::to_string(k), delta});
      const double violation = std::max(lo - lam[k], lam[k] - hi);
      out.checks.push_back(make_check("large_sigma_sandwich_" + std::to_string(k), violation <= 0.0,
                                      lam[k], violation));
    }
  } else {
    const double bl = std::pow(sigma_values[last], -m);
    out.checks.push_back(make_check("large_sigma_limit", gap[last] <= bl + 1e-9, gap[last], bl + 1e-9));
    if (lam.size() >= 2)
      out.checks.push_back(
          make_check("large_sigma_tail_monotone", gap[last] <= gap[last - 1], gap[last], gap[last - 1]));
  }
  return out;
}

namespace {

Grid scaled_grid_of(const Grid& g, double sigma) {
  Box b = g.box;
  for (int k = 0; k < b.dim; ++k) {
    b.lo[k] *= sigma;
    b.hi[k] *= sigma;
  }
  return build_grid(b, std::span<const int>(g.counts.data(), b.dim));
}

}  // namespace

InvarianceReport scaling_invariance_check(const Setup& setup, double sigma) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidParameter, "sigma must be positive");
  return scaling_invariance_check(setup, sigma, scaled_grid_of(setup.grid, sigma));
}

InvarianceReport scaling_invariance_check(const Setup& setup, double sigma, const Grid& scaled_grid) {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidParameter, "sigma must be positive");
  const Grid& g = setup.grid;
  if (scaled_grid.size() != g.size() || scaled_grid.dim() != g.dim())
    throw Error(ErrorKind::InvalidSetup, "scaled grid does not match the base grid");
  for (std::size_t p = 0; p < g.size(); ++p)
    for (int k = 0; k < g.dim(); ++k) {
      const double want = sigma * g.nodes[p][k];
      if (std::abs(scaled_grid.nodes[p][k] - want) > 1e-12 * std::max(1.0, std::abs(want)))
        throw Error(ErrorKind::InvalidSetup, "scaled grid nodes are not sigma times the base nodes");
    }
  const std::vector<double> ones(setup.field.species(), 1.0);
  std::vector<Kernel> scaled;
  for (const auto& k : setup.kernels) scaled.push_back(k.scaled(sigma));
  const AssembledOperator base = assemble_K(ones, setup.kernels, setup.field, g);
  const AssembledOperator other =
      assemble_K(ones, scaled, setup.field.argument_scaled(sigma), scaled_grid);
  const DenseMatrix a = base.to_dense();
  const DenseMatrix b = other.to_dense();
  InvarianceReport rep;
  rep.sigma = sigma;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      rep.matrix_gap = std::max(rep.matrix_gap, std::abs(a(i, j) - b(i, j)));
  rep.lambda_base = solve(base).lambda_p;
  rep.lambda_scaled = solve(other).lambda_p;
  rep.lambda_gap = std::abs(rep.lambda_base - rep.lambda_scaled);
  rep.pass = rep.matrix_gap <= 1e-12 && rep.lambda_gap <= 1e-10;
  return rep;
}

MonotonicityReport domain_monotonicity_check(const Setup& setup, const Box& inner, double sigma,
                                             double m) {
  const Grid& outer = setup.grid;
  if (inner.dim != outer.dim())
    throw Error(ErrorKind::InvalidSetup, "inner box dimension differs from the grid");
  inner.validate();
  // per-axis node indices of the outer grid falling inside the inner box
  std::array<std::vector<int>, 2> keep;
  for (int k = 0; k < 2; ++k) {
    if (k >= outer.dim()) {
      keep[k] = {0};
      continue;
    }
    for (int i = 0; i < outer.counts[k]; ++i) {
      const double x = outer.box.lo[k] + (i + 0.5) * outer.spacing[k];
      if (x > inner.lo[k] && x < inner.hi[k]) keep[k].push_back(i);
    }
  }
  std::array<int, 2> counts{static_cast<int>(keep[0].size()), static_cast<int>(keep[1].size())};
  const Grid in = build_grid(inner, std::span<const int>(counts.data(), inner.dim));
  std::size_t idx = 0;
  for (int a : keep[0])
    for (int b : keep[1]) {
      const std::size_t p = static_cast<std::size_t>(a) * outer.counts[1] + b;
      for (int k = 0; k < outer.dim(); ++k) {
        const double x = outer.nodes[p][k];
        if (std::abs(in.nodes[idx][k] - x) > 1e-12 * std::max(1.0, std::abs(x)))
          throw Error(ErrorKind::InvalidSetup, "inner grid nodes are not a subset of the outer grid");
      }
      ++idx;
    }

  const AssembledOperator op_out = assemble_K_sigma_m(sigma, m, setup.kernels, setup.field, outer);
  const AssembledOperator op_in = assemble_K_sigma_m(sigma, m, setup.kernels, setup.field, in);
  const EigenReport r_out = solve(op_out);
  const EigenReport r_in = solve(op_in);

  MonotonicityReport rep;
  rep.lambda_outer = r_out.lambda_p;
  rep.lambda_inner = r_in.lambda_p;
  rep.gap = rep.lambda_inner - rep.lambda_outer;
  rep.removed_measure = static_cast<double>(outer.size() - in.size()) * outer.weight;

  // C0 = sigma^-m max_i ||J_sigma,i||_inf * sup psi / min_{Omega_1} psi
  double jmax = 0.0;
  for (const auto& k : setup.kernels) jmax = std::max(jmax, k.scaled(sigma).sup_norm());
  const std::size_t n = outer.size();
  const auto& psi = r_out.eigenvector;
  const double sup = *std::max_element(psi.begin(), psi.end());
  double inf_inner = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < setup.field.species(); ++i)
    for (int a : keep[0])
      for (int b : keep[1]) {
        const std::size_t p = static_cast<std::size_t>(a) * outer.counts[1] + b;
        inf_inner = std::min(inf_inner, psi[i * n + p]);
      }
  rep.c0 = std::pow(sigma, -m) * jmax * sup / inf_inner;
  rep.ordered = rep.gap >= -1e-10;
  rep.within_bound = rep.gap <= rep.c0 * rep.removed_measure + 1e-10;
  return rep;
}

BumpFunction build_bump(const MatrixField& field, const Grid& grid, int k) {
  if (grid.dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "bump builder is 1D only");
  if (k < 1) throw Error(ErrorKind::InvalidParameter, "bump level k must be >= 1");
  const std::size_t n = grid.size();
  const std::size_t nsp = field.species();
  const double lo = grid.box.lo[0];
  const double hi = grid.box.hi[0];
  const double h = grid.spacing[0];

  std::vector<PointSpectrum> spec;
  spec.reserve(n);
  for (const auto& x : grid.nodes) spec.push_back(eval_lambda_bar(field, x));
  double nu = -std::numeric_limits<double>::infinity();
  for (const auto& s : spec) nu = std::max(nu, s.lambda_bar());
  const double level = nu - 1.0 / k;

  double best_r = 0.0;
  std::size_t best_c = n;
  for (std::size_t c = 0; c < n; ++c) {
    if (!(spec[c].lambda_bar() > level)) continue;
    const double xc = grid.x(c);
    for (double r = 0.25 * (hi - lo); r >= h; r *= 0.5) {
      if (xc - r < lo || xc + r > hi) continue;
      bool ok = true;
      for (std::size_t p = 0; p < n && ok; ++p)
        if (std::abs(grid.x(p) - xc) < r && !(spec[p].lambda_bar() > level)) ok = false;
      if (!ok) continue;
      if (r > best_r) {
        best_r = r;
        best_c = c;
      }
      break;
    }
  }
  if (best_c == n)
    throw ResolutionError("no node admits a bump at level nu - 1/" + std::to_string(k), 2 * n);

  BumpFunction b;
  b.center_index = best_c;
  b.center = grid.x(best_c);
  b.radius = best_r;
  b.inner_radius = 0.5 * best_r;
  b.nu = nu;
  b.level = level;
  b.values.assign(nsp * n, 0.0);

  // eigenvectors aligned outward from the center
  std::vector<std::vector<double>> e(n);
  e[best_c] = spec[best_c].top_vector;
  for (std::size_t p = best_c + 1; p < n; ++p) {
    e[p] = spec[p].top_vector;
    if (dot(e[p], e[p - 1]) < 0.0)
      for (double& v : e[p]) v = -v;
  }
  for (std::size_t p = best_c; p-- > 0;) {
    e[p] = spec[p].top_vector;
    if (dot(e[p], e[p + 1]) < 0.0)
      for (double& v : e[p]) v = -v;
  }
  double norm2sum = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    const double t = std::abs(grid.x(p) - b.center);
    double chi = 0.0;
    if (t <= b.inner_radius) chi = 1.0;
    else if (t < b.radius) chi = (b.radius - t) / (b.radius - b.inner_radius);
    for (std::size_t i = 0; i < nsp; ++i) {
      const double v = chi * e[p][i];
      b.values[i * n + p] = v;
      norm2sum += v * v;
    }
  }
  const double scale = 1.0 / std::sqrt(grid.weight * norm2sum);
  for (double& v : b.values) v *= scale;
  double form = 0.0;
  std::vector<double> f(nsp);
  for (std::size_t p = 0; p < n; ++p) {
    bool any = false;
    for (std::size_t i = 0; i < nsp; ++i) {
      f[i] = b.values[i * n + p];
      any = any || f[i] != 0.0;
    }
    if (!any) continue;
    const SmallMatrix a = field(grid.nodes[p]);
    for (std::size_t i = 0; i < nsp; ++i)
      for (std::size_t j = 0; j < nsp; ++j) form += f[i] * a[i * nsp + j] * f[j];
  }
  b.a_form = grid.weight * form;
  return b;
}

GradientReport gradient_inequality_check(const Kernel& kernel, const Grid& grid,
                                         std::span<const double> phi) {
  if (grid.dim() != 1) throw Error(ErrorKind::UnsupportedDimension, "gradient inequality is 1D only");
  const std::size_t n = grid.size();
  if (phi.size() != n) throw Error(ErrorKind::Shape, "profile length does not match the grid");
  if (n < 5) throw Error(ErrorKind::Precondition, "grid too small for the boundary condition");
  for (std::size_t p : {std::size_t{0}, std::size_t{1}, n - 2, n - 1})
    if (phi[p] != 0.0)
      throw Error(ErrorKind::Precondition, "profile must vanish on the two cells at each boundary");
  const DenseMatrix m = assemble_convolution(kernel, grid);
  const double w = grid.weight;
  double lhs = 0.0;
  for (std::size_t p = 0; p < n; ++p) {
    double mp = 0.0, kp = 0.0;
    const auto row = m.row(p);
    for (std::size_t q = 0; q < n; ++q) {
      mp += row[q] * phi[q];
      kp += row[q];
    }
    lhs -= phi[p] * (mp - kp * phi[p]);
  }
  GradientReport rep;
  rep.lhs = w * lhs;
  rep.d2 = second_moment(kernel, 4096).value;
  rep.rhs = 0.5 * rep.d2 * gradient_norm2(phi, grid.spacing[0], w);
  rep.pass = rep.lhs <= 1.05 * rep.rhs;
  return rep;
}

std::vector<double> tapered_sine(const Grid& grid) {
  const std::size_t n = grid.size();
  const double a = grid.box.lo[0] + 3.0 * grid.spacing[0];
  const double b = grid.box.hi[0] - 3.0 * grid.spacing[0];
  std::vector<double> phi(n, 0.0);
  for (std::size_t p = 0; p < n; ++p) {
    const double x = grid.x(p);
    if (x > a && x < b) phi[p] = std::sin(M_PI * (x - a) / (b - a));
  }
  return phi;
}

BoundsReport bounds_check(const AssembledOperator& op) {
  for (double d : op.rates)
    if (d != 1.0) throw Error(ErrorKind::InvalidSetup, "bounds check needs unit dispersal rates");
  if (op.scaling && (op.scaling->sigma != 1.0 || op.scaling->m != 0.0))
    throw Error(ErrorKind::InvalidSetup, "bounds check needs sigma = 1, m = 0");
  BoundsReport rep;
  // K = N - I + A, so lambda_v(N + A) = lambda_p(K) - 1
  rep.lambda_v = solve(op).lambda_p - 1.0;
  rep.nu = sup_lambda_bar(op.field, op.grid).nu;
  for (const auto& k : op.mass) rep.k_max = std::max(rep.k_max, *std::max_element(k.begin(), k.end()));
  rep.lower = -rep.nu - rep.k_max;
  rep.strict_margin = -rep.nu - rep.lambda_v;
  rep.lower_ok = rep.lambda_v >= rep.lower - 1e-10;
  rep.strict_ok = rep.strict_margin > 1e-6;
  if (op.grid.dim() == 1) {
    rep.hypothesis = hypothesis_P_diagnostic(op.field, op.grid, 3).verdict;
  } else {
    rep.hypothesis = HypVerdict::Inconclusive;
  }
  rep.strict_guaranteed = rep.hypothesis == HypVerdict::Holds;
  rep.pass = rep.lower_ok && (rep.strict_ok || !rep.strict_guaranteed);
  return rep;
}

}  // namespace nls
