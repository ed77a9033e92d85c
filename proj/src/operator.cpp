#include "frontspeed/operator.hpp"

#include <cmath>

#include "frontspeed/errors.hpp"

namespace frontspeed {

double OperatorMatrix::entry(std::size_t i, std::size_t j) const {
  const std::size_t n = size();
  const std::size_t im = (i == 0) ? n - 1 : i - 1;
  const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
  if (j == i) return diag[i];
  if (j == im) return lower[i];
  if (j == ip) return upper[i];
  return 0.0;
}

std::vector<double> OperatorMatrix::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply<double>(x, std::span<double>(y));
  return y;
}

OperatorMatrix assemble_operator(const CoefficientField& coeffs, std::span<const double> potential,
                                 double lambda) {
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
  const std::size_t n = coeffs.size();
  if (potential.size() != n) throw InvalidArgument("potential size mismatch");
  const double h = coeffs.grid().spacing();
  const double e = coeffs.direction_e();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 1.0 / (2.0 * h);

  OperatorMatrix a;
  a.lambda = lambda;
  a.spacing = h;
  a.lower.resize(n);
  a.diag.resize(n);
  a.upper.resize(n);
  a.zero_order.resize(n);
  a.perron_structure = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double q = coeffs.advection_q()[i];
    const double drift = 2.0 * lambda * e + q;
    a.lower[i] = inv_h2 - drift * inv_2h;
    a.upper[i] = inv_h2 + drift * inv_2h;
    a.zero_order[i] = lambda * lambda + lambda * q * e + potential[i];
    a.diag[i] = -2.0 * inv_h2 + a.zero_order[i];
    if (a.lower[i] < 0.0 || a.upper[i] < 0.0) a.perron_structure = false;
  }
  return a;
}

OperatorMatrix transpose(const OperatorMatrix& a) {
  const std::size_t n = a.size();
  OperatorMatrix t = a;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i == 0) ? n - 1 : i - 1;
    const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
    t.lower[i] = a.upper[im];
    t.upper[i] = a.lower[ip];
    t.zero_order[i] = a.diag[i] + t.lower[i] + t.upper[i];
  }
  return t;
}

OperatorMatrix assemble_operator(const CoefficientField& coeffs, double lambda) {
  return assemble_operator(coeffs, coeffs.eta(), lambda);
}

std::vector<double> periodic_first_derivative(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i == 0) ? n - 1 : i - 1;
    const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
    d[i] = (values[ip] - values[im]) / (2.0 * spacing);
  }
  return d;
}

std::vector<double> periodic_second_derivative(std::span<const double> values, double spacing) {
  const std::size_t n = values.size();
  std::vector<double> d(n);
  const double inv_h2 = 1.0 / (spacing * spacing);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i == 0) ? n - 1 : i - 1;
    const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
    d[i] = ((values[ip] - values[i]) - (values[i] - values[im])) * inv_h2;
  }
  return d;
}

}  // namespace frontspeed
