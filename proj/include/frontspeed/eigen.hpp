#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frontspeed/coefficients.hpp"
#include "frontspeed/operator.hpp"

namespace frontspeed {

/// Principal (Perron) eigenpair of a periodic operator.
/// The eigenfunction is strictly positive and normalized so that max = 1.
struct Eigenpair {
  double eigenvalue = 0.0;
  std::vector<double> eigenfunction;
  double lambda = 0.0;
  int iterations = 0;
  double residual_norm = 0.0;  // ||A psi - k psi||_inf / ||psi||_inf
};

struct EigenOptions {
  int max_iterations = 50000;
  // Shifted power-iteration sweeps run before the polish stage. With
  // `polish` off, power iteration runs alone until converged.
  int power_iterations = 64;
  bool polish = true;
  double eigenvalue_increment_tol = 1e-12;
  double residual_tol = 1e-10;
};

// Residual floor implied by rounding the eigenfunction to double; exceeds
// 1e-10 only for very fine grids (|A| ~ 1/h^2).
double residual_tolerance(const OperatorMatrix& a, const EigenOptions& options = {});

/// Perron eigenpair of `a`: the real eigenvalue of maximal real part and
/// its positive eigenvector.
///
/// Runs power iteration on B = A + sigma I with
/// sigma = max|A_ii| + max_i sum_{j != i} A_ij + 1, then polishes with
/// inverse iteration on (s I - A) where s is the Collatz-Wielandt upper
/// bound max_i (A v)_i / v_i plus a small margin. Since s exceeds the
/// Perron value, (s I - A)^{-1} is a positive matrix and every iterate stays
/// positive. Converged when the eigenvalue increment is below
/// `eigenvalue_increment_tol` and the residual below `residual_tol`.
///
/// Throws MeshTooCoarse when an off-diagonal entry is negative and
/// NoConvergence after `max_iterations` sweeps.
Eigenpair principal_eigenpair(const OperatorMatrix& a, const EigenOptions& options = {},
                              std::span<const double> initial = {});

// k(lambda) for L_{e,q,eta,lambda}; memoized on (coefficient hash, lambda to 12 digits).
Eigenpair k_of_lambda(const CoefficientField& coeffs, double lambda);

// kbar(-gamma): same operator with eta replaced by zeta and lambda = -gamma.
Eigenpair kbar_of_gamma(const CoefficientField& coeffs, double gamma);

void clear_eigen_cache();
std::size_t eigen_cache_size();

}  // namespace frontspeed
