#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nls {

enum class ErrorKind {
  InvalidResolution,
  InvalidParameter,
  MissingCutoff,
  Asymmetry,
  UnsupportedDimension,
  Shape,
  Resolution,
  NotCooperative,
  Convergence,
  Capacity,
  InvalidInput,
  Precondition,
  Inapplicable,
  InvalidPotential,
  Domain,
  Numerical,
  InvalidSetup,
  InvalidKernel,
  Parse,
};

const char* to_string(ErrorKind kind) noexcept;

// Every failure raised by the library carries a kind so that callers (and the
// CLI's exit-code mapping) can branch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised when a grid cannot resolve a (scaled) kernel.
class ResolutionError : public Error {
 public:
  ResolutionError(const std::string& what, std::size_t required_nodes)
      : Error(ErrorKind::Resolution, what), required_nodes_(required_nodes) {}

  std::size_t required_nodes() const noexcept { return required_nodes_; }

 private:
  std::size_t required_nodes_;
};

// Raised by iterative eigensolvers; keeps the best iterate seen.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double best_value,
                   std::vector<double> best_vector, double best_residual)
      : Error(ErrorKind::Convergence, what),
        best_value_(best_value),
        best_vector_(std::move(best_vector)),
        best_residual_(best_residual) {}

  double best_value() const noexcept { return best_value_; }
  const std::vector<double>& best_vector() const noexcept { return best_vector_; }
  double best_residual() const noexcept { return best_residual_; }

 private:
  double best_value_;
  std::vector<double> best_vector_;
  double best_residual_;
};

}  // namespace nls
