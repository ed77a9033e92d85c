#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "frontspeed/coefficients.hpp"

namespace frontspeed {

/// Periodic tridiagonal discretization of
///   L Psi = Psi'' + (2 lambda e + q) Psi' + (lambda^2 + lambda q e + eta) Psi
/// by second-order central differences. Row i couples nodes i-1, i, i+1
/// (mod n); `zero_order[i]` is the row sum.
struct OperatorMatrix {
  std::vector<double> lower;       // coefficient of Psi_{i-1}
  std::vector<double> diag;        // coefficient of Psi_i
  std::vector<double> upper;       // coefficient of Psi_{i+1}
  std::vector<double> zero_order;  // lambda^2 + lambda q e + eta_i
  double lambda = 0.0;
  double spacing = 0.0;
  // True iff every off-diagonal is nonnegative (spacing <= 2 / max|2 lambda e + q|).
  bool perron_structure = false;

  std::size_t size() const { return diag.size(); }

  // Entry (i, j) of the dense n x n matrix.
  double entry(std::size_t i, std::size_t j) const;

  // y = A x, evaluated as lower*(x_{i-1}-x_i) + upper*(x_{i+1}-x_i) + zero_order*x_i
  // to avoid cancelling the O(1/h^2) stencil weights.
  template <typename T>
  void apply(std::span<const T> x, std::span<T> y) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
      const std::size_t im = (i == 0) ? n - 1 : i - 1;
      const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
      const T xi = x[i];
      y[i] = T(lower[i]) * (x[im] - xi) + T(upper[i]) * (x[ip] - xi) + T(zero_order[i]) * xi;
    }
  }

  std::vector<double> apply(std::span<const double> x) const;
};

OperatorMatrix assemble_operator(const CoefficientField& coeffs, double lambda);

// Same assembly with an explicit zero-order field in place of eta.
OperatorMatrix assemble_operator(const CoefficientField& coeffs, std::span<const double> potential,
                                 double lambda);

// A^T in the same representation (Perron structure is preserved).
OperatorMatrix transpose(const OperatorMatrix& a);

// Periodic central differences on the cell.
std::vector<double> periodic_first_derivative(std::span<const double> values, double spacing);
std::vector<double> periodic_second_derivative(std::span<const double> values, double spacing);

}  // namespace frontspeed
