#pragma once

#include <string>
#include <vector>

#include "nls/operator.hpp"

namespace nls {

enum class EigenMethod { PowerShift, JacobiFull, ShiftInvert };
const char* to_string(EigenMethod m) noexcept;

struct EigenReport {
  double lambda_p = 0.0;
  BlockVector eigenvector;        // weight * sum phi^2 = 1, largest-magnitude entry positive
  double residual = 0.0;          // ||K phi + lambda_p phi||_inf
  double positivity_margin = 0.0; // min entry of the eigenvector
  int iterations = 0;
  EigenMethod method = EigenMethod::PowerShift;
};

// Default tol 1e-11; max_iter <= 0 means 200 * size.
EigenReport principal_eigenpair(const AssembledOperator& op, double tol = 1e-11, int max_iter = 0);

// Eigenvalues of K in descending order (size <= 600).
std::vector<double> full_spectrum_small(const AssembledOperator& op);
std::vector<double> full_spectrum_small(const DenseMatrix& k);

// <K phi, phi> / <phi, phi>
double rayleigh(const AssembledOperator& op, std::span<const double> phi);

double e_norm(const AssembledOperator& op, std::span<const double> phi);

enum class PairDirection { Lower, Upper };

struct TestPairCertificate {
  double lambda = 0.0;
  PairDirection direction = PairDirection::Lower;
  BlockVector slack;              // K phi + lambda phi
  double max_violation = 0.0;     // amount by which the sign condition is broken (>= 0)
  double tolerance = 0.0;
  bool pass = false;
  // Lower: kappa = 1 / min phi and lambda_p >= certified_bound = lambda - max(slack)+ * kappa.
  // Upper: kappa = sum phi / sum phi^2 and lambda_p <= certified_bound = lambda + max(-slack)+ * kappa.
  double kappa = 0.0;
  double certified_bound = 0.0;
};

TestPairCertificate verify_test_pair_lower(const AssembledOperator& op, double lambda,
                                           std::span<const double> phi, double tol);
TestPairCertificate verify_test_pair_upper(const AssembledOperator& op, double lambda,
                                           std::span<const double> phi, double tol);

// Upper certificate from phi_i(x) = e_i(x), the top eigenvector of A(x):
// lambda = max_{i,x} [ d_i (1 - k_i(x)) - lambda_bar(A(x)) ].
TestPairCertificate constant_upper_certificate(const AssembledOperator& op, double tol = 1e-12);
// Lower certificate from phi = 1: lambda = -(N max|a| + max_i d_i sup k_i).
TestPairCertificate well_definedness_certificate(const AssembledOperator& op, double tol = 1e-12);

struct TripleReport {
  double lambda_v = 0.0;
  double residual = 0.0;
  double lower_lambda = 0.0;
  double upper_lambda = 0.0;
  double certified_lower = 0.0;
  double certified_upper = 0.0;
  bool lower_pass = false;
  bool upper_pass = false;
  double gap = 0.0;  // certified_upper - certified_lower
  bool pass = false; // both pairs pass and both bounds lie within 100 * residual of lambda_v
};

TripleReport lambda_triple_consistency(const AssembledOperator& op);

struct InversePositivityReport {
  double lambda_p = 0.0;
  std::vector<std::size_t> columns;
  double min_entry = 0.0;
  bool pass = false;
};

InversePositivityReport inverse_positivity_check(const AssembledOperator& op, int samples);

}  // namespace nls
