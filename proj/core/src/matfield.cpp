#include "nls/matfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nls/errors.hpp"
#include "nls/expr.hpp"
#include "nls/linalg.hpp"
#include "nls/random.hpp"

namespace nls {

MatrixField::MatrixField(std::string name, std::size_t species, EvalFn eval)
    : name_(std::move(name)), n_(species), eval_(std::move(eval)) {
  if (n_ == 0) throw Error(ErrorKind::Shape, "matrix field needs at least one species");
}

namespace {

void check_square(std::size_t n, const std::vector<double>& m) {
  if (m.size() != n * n)
    throw Error(ErrorKind::Shape, "matrix has " + std::to_string(m.size()) +
                                      " entries, expected " + std::to_string(n * n));
}

void check_symmetric(std::size_t n, const std::vector<double>& m) {
  double scale = 1.0;
  for (double v : m) scale = std::max(scale, std::abs(v));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m[i * n + j] - m[j * n + i]) > 1e-12 * scale)
        throw Error(ErrorKind::Asymmetry, "coupling matrix is not symmetric");
}

std::string matrix_name(const std::vector<double>& m) {
  std::ostringstream os;
  os.precision(17);
  for (std::size_t k = 0; k < m.size(); ++k) os << (k ? "," : "") << m[k];
  return os.str();
}

}  // namespace

MatrixField MatrixField::constant(std::size_t species, const std::vector<double>& matrix) {
  check_square(species, matrix);
  check_symmetric(species, matrix);
  return MatrixField("constant(" + matrix_name(matrix) + ")", species,
                     [matrix](const std::array<double, 2>&, double* out) {
                       std::copy(matrix.begin(), matrix.end(), out);
                     });
}

MatrixField MatrixField::counterexample_2sp() {
  return MatrixField("counterexample_2sp", 2, [](const std::array<double, 2>& x, double* out) {
    const double s = 1.0 - std::sqrt(x[0]);
    out[0] = 2.0 / 3.0 * s;
    out[1] = 1.0 / 3.0 * s;
    out[2] = 1.0 / 3.0 * s;
    out[3] = 2.0 / 3.0 * s;
  });
}

MatrixField MatrixField::scalar_times(const std::string& expr, std::size_t species,
                                      const std::vector<double>& matrix) {
  check_square(species, matrix);
  check_symmetric(species, matrix);
  Expression e(expr);
  return MatrixField("(" + expr + ")*(" + matrix_name(matrix) + ")", species,
                     [e, matrix](const std::array<double, 2>& x, double* out) {
                       const double s = e(x[0], x[1]);
                       for (std::size_t k = 0; k < matrix.size(); ++k) out[k] = s * matrix[k];
                     });
}

MatrixField MatrixField::scalar(const std::string& expr) {
  Expression e(expr);
  return MatrixField("scalar(" + expr + ")", 1,
                     [e](const std::array<double, 2>& x, double* out) { out[0] = e(x[0], x[1]); });
}

MatrixField MatrixField::expressions(std::size_t species, const std::vector<std::string>& entries) {
  if (entries.size() != species * species)
    throw Error(ErrorKind::Shape, "expression field needs N*N entries");
  std::vector<Expression> exprs;
  exprs.reserve(entries.size());
  for (const auto& s : entries) exprs.emplace_back(s);
  // Structural symmetry: mirrored entries must be the same expression text or agree on samples.
  for (std::size_t i = 0; i < species; ++i)
    for (std::size_t j = i + 1; j < species; ++j) {
      if (entries[i * species + j] == entries[j * species + i]) continue;
      for (int k = 0; k <= 16; ++k) {
        const double x = -1.0 + k / 8.0;
        const double a = exprs[i * species + j](x);
        const double b = exprs[j * species + i](x);
        if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
          throw Error(ErrorKind::Asymmetry, "expression field is not symmetric");
      }
    }
  std::string name = "expr(";
  for (std::size_t k = 0; k < entries.size(); ++k) name += (k ? ";" : "") + entries[k];
  name += ")";
  return MatrixField(name, species, [exprs, species](const std::array<double, 2>& x, double* out) {
    for (std::size_t i = 0; i < species; ++i)
      for (std::size_t j = i; j < species; ++j) {
        const double v = 0.5 * (exprs[i * species + j](x[0], x[1]) + exprs[j * species + i](x[0], x[1]));
        out[i * species + j] = v;
        out[j * species + i] = v;
      }
  });
}

MatrixField MatrixField::smooth_bump(std::size_t species, const std::vector<double>& matrix,
                                     double eps, double x0, double width) {
  check_square(species, matrix);
  check_symmetric(species, matrix);
  if (!(width > 0.0)) throw Error(ErrorKind::InvalidParameter, "smooth_bump width must be positive");
  std::ostringstream os;
  os.precision(17);
  os << "smooth_bump(" << matrix_name(matrix) << ";" << eps << "," << x0 << "," << width << ")";
  return MatrixField(os.str(), species, [=](const std::array<double, 2>& x, double* out) {
    const double r2 = (x[0] - x0) * (x[0] - x0);
    const double g = eps * std::exp(-r2 / (width * width));
    std::copy(matrix.begin(), matrix.end(), out);
    for (std::size_t i = 0; i < species; ++i) out[i * species + i] += g;
  });
}

MatrixField MatrixField::random(std::size_t species, std::uint64_t seed) {
  struct Coef {
    double c, b, omega, phase;
  };
  CounterRng rng(seed);
  std::vector<Coef> coef(species * species);
  for (std::size_t i = 0; i < species; ++i)
    for (std::size_t j = i; j < species; ++j) {
      Coef k;
      if (i == j) {
        k.c = rng.uniform(-1.0, 1.0);
        k.b = rng.uniform(0.0, 0.5);
      } else {
        k.c = rng.uniform(0.5, 1.5);
        k.b = rng.uniform(0.0, 0.4) * k.c;  // |b| < c keeps a_ij > 0
      }
      k.omega = rng.uniform(0.5, 3.0);
      k.phase = rng.uniform(0.0, 2.0 * M_PI);
      coef[i * species + j] = k;
      coef[j * species + i] = k;
    }
  return MatrixField("random(" + std::to_string(species) + "," + std::to_string(seed) + ")",
                     species, [coef](const std::array<double, 2>& x, double* out) {
                       for (std::size_t k = 0; k < coef.size(); ++k) {
                         const Coef& c = coef[k];
                         out[k] = c.c + c.b * std::cos(c.omega * x[0] + c.phase);
                       }
                     });
}

SmallMatrix MatrixField::operator()(const std::array<double, 2>& x) const {
  SmallMatrix m(n_ * n_);
  eval_(x, m.data());
  return m;
}

MatrixField MatrixField::shifted(double c) const {
  std::ostringstream os;
  os.precision(17);
  os << name_ << "+" << c << "I";
  auto base = eval_;
  const std::size_t n = n_;
  return MatrixField(os.str(), n, [base, n, c](const std::array<double, 2>& x, double* out) {
    base(x, out);
    for (std::size_t i = 0; i < n; ++i) out[i * n + i] += c;
  });
}

MatrixField MatrixField::argument_scaled(double sigma) const {
  if (!(sigma > 0.0)) throw Error(ErrorKind::InvalidParameter, "sigma must be positive");
  std::ostringstream os;
  os.precision(17);
  os << name_ << "(x/" << sigma << ")";
  auto base = eval_;
  return MatrixField(os.str(), n_, [base, sigma](const std::array<double, 2>& x, double* out) {
    base({x[0] / sigma, x[1] / sigma}, out);
  });
}

bool MatrixField::cooperative_on(const Grid& grid, bool strict) const {
  SmallMatrix a(n_ * n_);
  for (const auto& x : grid.nodes) {
    eval_(x, a.data());
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < n_; ++j) {
        if (i == j && !strict) continue;
        if (!(a[i * n_ + j] > 0.0)) return false;
      }
  }
  return true;
}

// ---------------------------------------------------------------- spectra of A(x)

PointSpectrum eval_lambda_bar(const MatrixField& field, const std::array<double, 2>& x) {
  const std::size_t n = field.species();
  if (n > 8) throw Error(ErrorKind::Capacity, "pointwise spectra support N <= 8");
  const SmallMatrix a = field(x);
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = a[i * n + j];
  SymmetricEigen eig = jacobi_eigen(m, true);
  PointSpectrum ps;
  ps.x = x;
  ps.eigenvalues = eig.values;
  ps.top_vector = eig.vectors.front();
  auto& e = ps.top_vector;
  const double nrm = norm2(e);
  for (double& v : e) v /= nrm;
  std::size_t big = 0;
  for (std::size_t k = 1; k < n; ++k)
    if (std::abs(e[k]) > std::abs(e[big])) big = k;
  if (e[big] < 0.0)
    for (double& v : e) v = -v;
  double res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = -ps.eigenvalues.front() * e[i];
    for (std::size_t j = 0; j < n; ++j) s += a[i * n + j] * e[j];
    res = std::max(res, std::abs(s));
  }
  ps.residual = res;
  return ps;
}

PointSpectrum eval_lambda_bar(const MatrixField& field, double x) {
  return eval_lambda_bar(field, {x, 0.0});
}

SupResult sup_lambda_bar(const MatrixField& field, const Grid& grid) {
  if (grid.size() == 0) throw Error(ErrorKind::InvalidInput, "empty grid");
  SupResult best;
  best.nu = -std::numeric_limits<double>::infinity();
  for (std::size_t p = 0; p < grid.size(); ++p) {
    const double v = eval_lambda_bar(field, grid.nodes[p]).lambda_bar();
    if (v > best.nu) {
      best.nu = v;
      best.index = p;
      best.x = grid.nodes[p];
    }
  }
  return best;
}

EigenSelection top_eigen_selection(const MatrixField& field, const Grid& grid) {
  EigenSelection sel;
  sel.lambda1.reserve(grid.size());
  sel.vectors.reserve(grid.size());
  for (std::size_t p = 0; p < grid.size(); ++p) {
    PointSpectrum ps = eval_lambda_bar(field, grid.nodes[p]);
    if (p > 0 && dot(ps.top_vector, sel.vectors.back()) < 0.0)
      for (double& v : ps.top_vector) v = -v;
    sel.lambda1.push_back(ps.lambda_bar());
    sel.vectors.push_back(std::move(ps.top_vector));
  }
  return sel;
}

const char* to_string(HypVerdict v) noexcept {
  switch (v) {
    case HypVerdict::Holds: return "holds";
    case HypVerdict::Fails: return "fails";
    case HypVerdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

namespace {

bool field_is_constant(const MatrixField& field, const Grid& grid) {
  const SmallMatrix ref = field(grid.nodes.front());
  double scale = 1.0;
  for (double v : ref) scale = std::max(scale, std::abs(v));
  for (const auto& x : grid.nodes) {
    const SmallMatrix a = field(x);
    for (std::size_t k = 0; k < a.size(); ++k)
      if (std::abs(a[k] - ref[k]) > 1e-14 * scale) return false;
  }
  return true;
}

}  // namespace

HypPReport hypothesis_P_diagnostic(const MatrixField& field, const Grid& grid, int refinements) {
  if (grid.dim() != 1)
    throw Error(ErrorKind::UnsupportedDimension, "Hypothesis P diagnostic is 1D only");
  if (refinements < 3)
    throw Error(ErrorKind::InvalidParameter, "Hypothesis P diagnostic needs >= 3 refinements");
  HypPReport rep;
  rep.exponent = std::numeric_limits<double>::quiet_NaN();
  const SupResult sup = sup_lambda_bar(field, grid);
  rep.nu = sup.nu;
  rep.x0 = sup.x[0];
  if (field_is_constant(field, grid)) {
    rep.constant_field = true;
    rep.verdict = HypVerdict::Holds;
    return rep;
  }

  const double lo = grid.box.lo[0];
  const double hi = grid.box.hi[0];
  auto lam = [&](double x) { return eval_lambda_bar(field, x).lambda_bar(); };

  // Refine the supremum: golden section around the best node, plus the box ends.
  {
    double a = std::max(lo, rep.x0 - grid.spacing[0]);
    double b = std::min(hi, rep.x0 + grid.spacing[0]);
    const double g = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - g * (b - a);
    double d = a + g * (b - a);
    double fc = lam(c);
    double fd = lam(d);
    for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, std::abs(a)); ++it) {
      if (fc >= fd) {
        b = d; d = c; fd = fc;
        c = b - g * (b - a); fc = lam(c);
      } else {
        a = c; c = d; fc = fd;
        d = a + g * (b - a); fd = lam(d);
      }
    }
    const double candidates[4] = {c, d, lo, hi};
    for (double x : candidates) {
      const double v = lam(x);
      if (v > rep.nu) {
        rep.nu = v;
        rep.x0 = x;
      }
    }
  }

  // Local power-law fit of nu - lambda1 ~ C |x - x0|^p.
  {
    const double window = 0.25 * (hi - lo);
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int m = 0;
    for (const auto& node : grid.nodes) {
      const double dx = std::abs(node[0] - rep.x0);
      if (dx > window || dx == 0.0) continue;
      const double gap = rep.nu - lam(node[0]);
      if (!(gap > 1e-12)) continue;
      const double u = std::log(dx);
      const double v = std::log(gap);
      sx += u; sy += v; sxx += u * u; sxy += u * v;
      ++m;
    }
    if (m >= 2) {
      const double den = m * sxx - sx * sx;
      if (den != 0.0) rep.exponent = (m * sxy - sx * sy) / den;
    }
  }

  // Partial sums of w / (nu - lambda1) under refinement.
  const int base = grid.counts[0];
  bool infinite = false;
  for (int r = 0; r <= refinements; ++r) {
    const int n = base << r;
    const Grid g = build_grid_1d(lo, hi, n);
    double s = 0.0;
    for (const auto& node : g.nodes) {
      const double gap = rep.nu - lam(node[0]);
      if (gap <= 0.0) {
        infinite = true;
        continue;
      }
      s += g.weight / gap;
    }
    rep.counts.push_back(n);
    rep.divergence_trend.push_back(infinite ? std::numeric_limits<double>::infinity() : s);
  }
  if (infinite) {
    rep.verdict = HypVerdict::Holds;
    return rep;
  }
  const auto& t = rep.divergence_trend;
  bool growing = true;
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] >= 1.1 * t[k - 1])) growing = false;
  const double last_change = std::abs(t.back() - t[t.size() - 2]) / std::abs(t[t.size() - 2]);
  if (growing) rep.verdict = HypVerdict::Holds;
  else if (last_change <= 0.01) rep.verdict = HypVerdict::Fails;
  else rep.verdict = HypVerdict::Inconclusive;
  return rep;
}

}  // namespace nls
