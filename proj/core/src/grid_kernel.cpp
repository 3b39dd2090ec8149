#include "nls/grid_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nls/errors.hpp"
#include "nls/quadrature.hpp"

namespace nls {

Box Box::interval(double a, double b) {
  Box box;
  box.dim = 1;
  box.lo = {a, 0.0};
  box.hi = {b, 1.0};
  box.validate();
  return box;
}

Box Box::rectangle(double a0, double b0, double a1, double b1) {
  Box box;
  box.dim = 2;
  box.lo = {a0, a1};
  box.hi = {b0, b1};
  box.validate();
  return box;
}

double Box::volume() const {
  double v = 1.0;
  for (int k = 0; k < dim; ++k) v *= hi[k] - lo[k];
  return v;
}

void Box::validate() const {
  if (dim != 1 && dim != 2)
    throw Error(ErrorKind::UnsupportedDimension, "box dimension must be 1 or 2");
  for (int k = 0; k < dim; ++k) {
    if (!(lo[k] < hi[k]) || !std::isfinite(lo[k]) || !std::isfinite(hi[k]))
      throw Error(ErrorKind::InvalidParameter, "box bounds must satisfy lo < hi");
  }
}

Grid build_grid(const Box& box, std::span<const int> counts) {
  box.validate();
  if (counts.size() != static_cast<std::size_t>(box.dim))
    throw Error(ErrorKind::Shape, "one node count per axis is required");
  for (int c : counts)
    if (c < 2) throw Error(ErrorKind::InvalidResolution, "node count must be at least 2 per axis");
  Grid g;
  g.box = box;
  g.counts = {counts[0], box.dim == 2 ? counts[1] : 1};
  g.weight = 1.0;
  for (int k = 0; k < box.dim; ++k) {
    g.spacing[k] = (box.hi[k] - box.lo[k]) / g.counts[k];
    g.weight *= g.spacing[k];
  }
  auto mid = [&](int axis, int i) { return box.lo[axis] + (i + 0.5) * g.spacing[axis]; };
  g.nodes.reserve(static_cast<std::size_t>(g.counts[0]) * g.counts[1]);
  for (int i = 0; i < g.counts[0]; ++i) {
    if (box.dim == 1) {
      g.nodes.push_back({mid(0, i), 0.0});
    } else {
      for (int j = 0; j < g.counts[1]; ++j) g.nodes.push_back({mid(0, i), mid(1, j)});
    }
  }
  return g;
}

Grid build_grid_1d(double a, double b, int n) {
  const int counts[1] = {n};
  return build_grid(Box::interval(a, b), counts);
}

// ---------------------------------------------------------------- kernels

namespace {

bool at_jump(double az, double r) { return std::abs(az - r) <= 1e-9 * r; }

double trapezoid_profile(double z, double c, double width) {
  const double az = std::abs(z);
  if (az <= 0.2) return c;
  if (az >= width) return 0.0;
  return c * (width - az) / (width - 0.2);
}

double trapezoid_width(double c) {
  if (!(c > 1.0) || !std::isfinite(c))
    throw Error(ErrorKind::InvalidParameter, "trapezoid kernel needs plateau height c > 1");
  const double width = 1.0 / c - 0.2;
  if (!(width > 0.2))
    throw Error(ErrorKind::InvalidParameter, "trapezoid kernel: 1/c - 0.2 must exceed 0.2");
  return width;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

Kernel::Kernel(Spec spec, int dim) : spec_(std::make_shared<const Spec>(std::move(spec))), dim_(dim) {
  if (dim != 1 && dim != 2)
    throw Error(ErrorKind::UnsupportedDimension, "kernel dimension must be 1 or 2");
}

Kernel Kernel::uniform(int dim) {
  Spec s;
  s.id = "uniform";
  s.profile = [](double z) {
    const double az = std::abs(z);
    if (at_jump(az, 0.5)) return 0.5;
    return az < 0.5 ? 1.0 : 0.0;
  };
  s.support = 0.5;
  s.breakpoints = {0.5};
  s.sup_norm = 1.0;
  return Kernel(std::move(s), dim);
}

Kernel Kernel::triangle(int dim) {
  Spec s;
  s.id = "triangle";
  s.profile = [](double z) { return std::max(0.0, 1.0 - std::abs(z)); };
  s.support = 1.0;
  s.breakpoints = {0.0, 1.0};
  s.sup_norm = 1.0;
  return Kernel(std::move(s), dim);
}

Kernel Kernel::trapezoid(double c, int dim) {
  const double width = trapezoid_width(c);
  Spec s;
  s.id = "trapezoid(" + fmt(c) + ")";
  s.profile = [c, width](double z) { return trapezoid_profile(z, c, width); };
  s.support = width;
  s.breakpoints = {0.2, width};
  s.sup_norm = c;
  return Kernel(std::move(s), dim);
}

Kernel Kernel::mollified_trapezoid(double c, int dim) {
  const double width = trapezoid_width(c);
  constexpr double eps = 0.01;
  auto bump = [](double t) {
    const double u = t / eps;
    if (std::abs(u) >= 1.0) return 0.0;
    return std::exp(-1.0 / (1.0 - u * u));
  };
  const double norm = adaptive_gauss(bump, -eps, eps, 1e-300, 1e-15);
  Spec s;
  s.id = "mollified_trapezoid(" + fmt(c) + ")";
  s.profile = [=](double z) {
    const double az = std::abs(z);
    if (az >= width + eps) return 0.0;
    if (az <= 0.2 - eps) return c;
    const double cuts[4] = {az - 0.2, az + 0.2, az - width, az + width};
    auto integrand = [&](double t) { return trapezoid_profile(az - t, c, width) * bump(t); };
    return composite_gauss(integrand, -eps, eps, cuts, 256) / norm;
  };
  s.support = width + eps;
  s.breakpoints = {0.2 - eps, 0.2 + eps, width - eps, width + eps};
  s.sup_norm = c;
  return Kernel(std::move(s), dim);
}

Kernel Kernel::gauss_cutoff(double sd, double cutoff, int dim) {
  if (!(sd > 0.0) || !(cutoff > 0.0))
    throw Error(ErrorKind::InvalidParameter, "gauss_cutoff needs s > 0 and R > 0");
  // mass outside [-R, R], divided out below
  const double tail = std::erfc(cutoff / (sd * std::sqrt(2.0)));
  const double scale = 1.0 / (sd * std::sqrt(2.0 * M_PI) * (1.0 - tail));
  Spec s;
  s.id = "gauss_cutoff(" + fmt(sd) + "," + fmt(cutoff) + ")";
  s.profile = [=](double z) {
    const double az = std::abs(z);
    const double g = scale * std::exp(-0.5 * (z / sd) * (z / sd));
    if (at_jump(az, cutoff)) return 0.5 * g;
    return az < cutoff ? g : 0.0;
  };
  s.support = cutoff;
  s.breakpoints = {cutoff};
  s.sup_norm = scale;
  return Kernel(std::move(s), dim);
}

Kernel Kernel::custom(std::string id, Profile profile, std::optional<double> support,
                      std::vector<double> breakpoints, int dim) {
  Spec s;
  s.id = std::move(id);
  s.support = support;
  s.breakpoints = std::move(breakpoints);
  // sup of the profile by sampling; custom kernels should peak near the origin
  const double range = support.value_or(10.0);
  double best = 0.0;
  for (int k = 0; k <= 4096; ++k) best = std::max(best, profile(range * k / 4096.0));
  s.sup_norm = best;
  s.profile = std::move(profile);
  return Kernel(std::move(s), dim);
}

std::optional<double> Kernel::support_radius() const {
  if (!spec_->support) return std::nullopt;
  return *spec_->support * sigma_;
}

double Kernel::sup_norm() const {
  const double one = spec_->sup_norm / sigma_;
  return dim_ == 2 ? one * one : one;
}

std::vector<double> Kernel::breakpoints() const {
  std::vector<double> out;
  for (double b : spec_->breakpoints) out.push_back(b * sigma_);
  return out;
}

Kernel Kernel::scaled(double sigma) const {
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw Error(ErrorKind::InvalidParameter, "scale factor sigma must be positive");
  Kernel k = *this;
  k.sigma_ = sigma_ * sigma;
  return k;
}

Kernel Kernel::times(double factor) const {
  Spec s = *spec_;
  s.id = spec_->id + "*" + fmt(factor);
  auto base = spec_->profile;
  s.profile = [base, factor](double z) { return factor * base(z); };
  s.sup_norm = spec_->sup_norm * factor;
  Kernel k(std::move(s), dim_);
  k.sigma_ = sigma_;
  return k;
}

namespace {

// Integration range for the 1D profile in scaled units.
double quad_range(const Kernel& kernel) {
  if (auto r = kernel.support_radius()) return *r;
  return 50.0 * kernel.sigma();
}

std::vector<double> signed_breakpoints(const Kernel& kernel) {
  std::vector<double> cuts{0.0};
  for (double b : kernel.breakpoints()) {
    cuts.push_back(b);
    cuts.push_back(-b);
  }
  return cuts;
}

double profile_integral(const Kernel& kernel, int panels, int power) {
  const double r = quad_range(kernel);
  const auto cuts = signed_breakpoints(kernel);
  auto f = [&](double z) {
    double v = kernel.profile(z);
    for (int k = 0; k < power; ++k) v *= z;
    return v;
  };
  return composite_gauss(f, -r, r, cuts, panels);
}

}  // namespace

double kernel_mass(const Kernel& kernel, int quad_resolution) {
  const double m = profile_integral(kernel, quad_resolution, 0);
  return kernel.dim() == 2 ? m * m : m;
}

KernelReport validate_kernel(const Kernel& kernel, int quad_resolution, double tol) {
  if (quad_resolution < 64)
    throw Error(ErrorKind::InvalidResolution, "kernel validation needs quad_resolution >= 64");
  KernelReport rep;
  rep.mass = kernel_mass(kernel, quad_resolution);
  const double r = quad_range(kernel);
  double min_sample = kernel.profile(0.0);
  double defect = 0.0;
  for (int k = 0; k <= quad_resolution; ++k) {
    // sample a little past the support so that negative tails would be seen
    const double z = 1.1 * r * k / quad_resolution;
    const double a = kernel.profile(z);
    const double b = kernel.profile(-z);
    min_sample = std::min({min_sample, a, b});
    defect = std::max(defect, std::abs(a - b));
  }
  if (kernel.dim() == 2) {
    const double c = kernel.profile(0.0);
    min_sample = std::min(min_sample, min_sample * c);
    defect *= c;
  }
  rep.min_sample = min_sample;
  rep.symmetry_defect = defect;
  rep.center_value = kernel.dim() == 2 ? kernel(0.0, 0.0) : kernel(0.0);
  rep.mass_ok = std::abs(rep.mass - 1.0) <= tol;
  rep.nonnegative_ok = min_sample >= 0.0;
  rep.symmetric_ok = defect <= tol;
  rep.center_ok = rep.center_value > 0.0;
  return rep;
}

MomentResult second_moment(const Kernel& kernel, int quad_resolution) {
  if (!kernel.support_radius())
    throw Error(ErrorKind::MissingCutoff,
                "kernel '" + kernel.id() + "' has unbounded support and no cutoff radius");
  if (quad_resolution < 1)
    throw Error(ErrorKind::InvalidResolution, "quad_resolution must be positive");
  const double coarse = profile_integral(kernel, quad_resolution, 2);
  const double fine = profile_integral(kernel, 2 * quad_resolution, 2);
  MomentResult out{fine, std::abs(fine - coarse)};
  if (kernel.dim() == 2) {
    // int int J(z0) J(z1) (z0^2 + z1^2) = 2 * m2 * m0
    const double m0 = profile_integral(kernel, 2 * quad_resolution, 0);
    out.value = 2.0 * fine * m0;
    out.error = 2.0 * out.error * m0;
  }
  return out;
}

Kernel scale_kernel(const Kernel& kernel, double sigma) { return kernel.scaled(sigma); }

Kernel trapezoid_kernel(double c) { return Kernel::trapezoid(c); }

namespace {

std::vector<double> parse_args(const std::string& name, const std::string& inner) {
  std::vector<double> out;
  std::stringstream ss(inner);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "kernel preset '" + name + "': bad argument '" + item + "'");
    }
  }
  return out;
}

}  // namespace

Kernel kernel_from_name(const std::string& name, int dim) {
  const auto open = name.find('(');
  std::string head = name.substr(0, open);
  while (!head.empty() && std::isspace(static_cast<unsigned char>(head.back()))) head.pop_back();
  head.erase(0, std::min(head.size(), head.find_first_not_of(" \t")));
  std::vector<double> args;
  if (open != std::string::npos) {
    const auto close = name.rfind(')');
    if (close == std::string::npos || close < open)
      throw Error(ErrorKind::Parse, "kernel preset '" + name + "': missing ')'");
    args = parse_args(name, name.substr(open + 1, close - open - 1));
  }
  auto need = [&](std::size_t k) {
    if (args.size() != k)
      throw Error(ErrorKind::Parse, "kernel preset '" + name + "' expects " + std::to_string(k) +
                                        " argument(s)");
  };
  if (head == "uniform") { need(0); return Kernel::uniform(dim); }
  if (head == "triangle") { need(0); return Kernel::triangle(dim); }
  if (head == "trapezoid") { need(1); return Kernel::trapezoid(args[0], dim); }
  if (head == "mollified_trapezoid") { need(1); return Kernel::mollified_trapezoid(args[0], dim); }
  if (head == "gauss_cutoff") { need(2); return Kernel::gauss_cutoff(args[0], args[1], dim); }
  throw Error(ErrorKind::InvalidInput, "unknown kernel preset '" + name + "'");
}

}  // namespace nls
