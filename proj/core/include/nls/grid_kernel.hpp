#pragma once

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace nls {

struct Box {
  int dim = 1;
  std::array<double, 2> lo{0.0, 0.0};
  std::array<double, 2> hi{1.0, 1.0};

  static Box interval(double a, double b);
  static Box rectangle(double a0, double b0, double a1, double b1);

  double volume() const;
  void validate() const;
};

// Midpoint grid. Node p of a 2D grid is (i0, i1) with p = i0 * counts[1] + i1.
struct Grid {
  Box box;
  std::array<int, 2> counts{0, 1};
  std::array<double, 2> spacing{0.0, 1.0};
  double weight = 0.0;
  std::vector<std::array<double, 2>> nodes;

  std::size_t size() const noexcept { return nodes.size(); }
  int dim() const noexcept { return box.dim; }
  // first coordinate of node p
  double x(std::size_t p) const noexcept { return nodes[p][0]; }
};

Grid build_grid(const Box& box, std::span<const int> counts);
Grid build_grid_1d(double a, double b, int n);

// Symmetric 1D profile; dim-2 kernels are products J(z0) J(z1) of the profile.
// At a jump discontinuity the profile returns the mean of the one-sided values.
using Profile = std::function<double(double)>;

class Kernel {
 public:
  struct Spec {
    std::string id;
    Profile profile;
    std::optional<double> support;      // radius of the 1D profile
    std::vector<double> breakpoints;    // non-smooth points of the profile, z >= 0
    double sup_norm = 0.0;              // of the 1D profile
  };

  Kernel() = default;
  Kernel(Spec spec, int dim = 1);

  static Kernel uniform(int dim = 1);
  static Kernel triangle(int dim = 1);
  static Kernel trapezoid(double c, int dim = 1);
  static Kernel mollified_trapezoid(double c, int dim = 1);
  static Kernel gauss_cutoff(double s, double cutoff, int dim = 1);
  // `support` may be empty for kernels without a declared cutoff.
  static Kernel custom(std::string id, Profile profile, std::optional<double> support,
                       std::vector<double> breakpoints = {}, int dim = 1);

  const std::string& id() const noexcept { return spec_->id; }
  int dim() const noexcept { return dim_; }
  double sigma() const noexcept { return sigma_; }

  // scaled 1D profile J_sigma(z) = J(z / sigma) / sigma
  double profile(double z) const { return spec_->profile(z / sigma_) / sigma_; }
  double operator()(double z) const { return profile(z); }
  double operator()(double z0, double z1) const { return profile(z0) * profile(z1); }

  std::optional<double> support_radius() const;
  // ||J||_inf for the kernel in its own dimension
  double sup_norm() const;
  std::vector<double> breakpoints() const;

  Kernel scaled(double sigma) const;
  // A kernel multiplied by a constant factor (used to build invalid examples).
  Kernel times(double factor) const;

 private:
  std::shared_ptr<const Spec> spec_;
  int dim_ = 1;
  double sigma_ = 1.0;
};

struct KernelReport {
  bool mass_ok = false;
  bool nonnegative_ok = false;
  bool symmetric_ok = false;
  bool center_ok = false;
  double mass = 0.0;
  double min_sample = 0.0;
  double symmetry_defect = 0.0;
  double center_value = 0.0;
  bool pass() const noexcept { return mass_ok && nonnegative_ok && symmetric_ok && center_ok; }
};

// Quadrature mass over R^dim.
double kernel_mass(const Kernel& kernel, int quad_resolution);
KernelReport validate_kernel(const Kernel& kernel, int quad_resolution, double tol);

struct MomentResult {
  double value = 0.0;
  double error = 0.0;
};

MomentResult second_moment(const Kernel& kernel, int quad_resolution);

Kernel scale_kernel(const Kernel& kernel, double sigma);
Kernel trapezoid_kernel(double c);

// Kernel preset by name, e.g. "uniform", "trapezoid(1.05)", "gauss_cutoff(0.1,0.8)".
Kernel kernel_from_name(const std::string& name, int dim = 1);

}  // namespace nls
