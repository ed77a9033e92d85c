#include "frontspeed/coefficients.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "frontspeed/errors.hpp"
#include "frontspeed/reaction.hpp"

namespace frontspeed {
namespace {

constexpr std::uint64_t kFnvOffset = 1469598103934665603ULL;
constexpr std::uint64_t kFnvPrime = 1099511628211ULL;

void mix(std::uint64_t& h, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    h ^= (word >> (8 * i)) & 0xffU;
    h *= kFnvPrime;
  }
}

void mix(std::uint64_t& h, double value) {
  // +0 and -0 hash alike.
  if (value == 0.0) value = 0.0;
  mix(h, std::bit_cast<std::uint64_t>(value));
}

}  // namespace

CoefficientField::CoefficientField(PeriodicGrid grid, std::vector<double> advection_q,
                                   std::vector<double> eta, std::vector<double> zeta,
                                   int direction_e)
    : grid_(std::move(grid)),
      advection_q_(std::move(advection_q)),
      eta_(std::move(eta)),
      zeta_(std::move(zeta)),
      direction_e_(direction_e) {
  const std::size_t n = grid_.n_cells();
  if (advection_q_.size() != n || eta_.size() != n || zeta_.size() != n) {
    throw InvalidArgument("coefficient arrays must have one sample per grid node");
  }
  if (direction_e_ != 1 && direction_e_ != -1) {
    throw InvalidArgument("direction must be +1 or -1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(advection_q_[i]) || !std::isfinite(eta_[i]) || !std::isfinite(zeta_[i])) {
      throw InvalidArgument("coefficient samples must be finite");
    }
  }
  const double q0 = advection_q_.front();
  for (double q : advection_q_) {
    if (std::abs(q - q0) > 1e-12 * std::max(1.0, std::abs(q0))) {
      throw InvalidArgument(
          "variable advection rejected: a divergence-free field on the line is constant");
    }
  }

  hash_ = kFnvOffset;
  mix(hash_, grid_.period_length());
  mix(hash_, static_cast<std::uint64_t>(n));
  mix(hash_, static_cast<std::uint64_t>(direction_e_ + 2));
  for (double v : advection_q_) mix(hash_, v);
  for (double v : eta_) mix(hash_, v);
  for (double v : zeta_) mix(hash_, v);
}

CoefficientField CoefficientField::sampled(const PeriodicGrid& grid, double advection_q,
                                           const Function& eta, const Function& zeta,
                                           int direction_e) {
  const std::size_t n = grid.n_cells();
  std::vector<double> q(n, advection_q), eta_s(n), zeta_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    eta_s[i] = eta(grid.node(i));
    zeta_s[i] = zeta(grid.node(i));
  }
  return CoefficientField(grid, std::move(q), std::move(eta_s), std::move(zeta_s), direction_e);
}

CoefficientField CoefficientField::constant(const PeriodicGrid& grid, double advection_q,
                                            double eta, double zeta, int direction_e) {
  const std::size_t n = grid.n_cells();
  return CoefficientField(grid, std::vector<double>(n, advection_q), std::vector<double>(n, eta),
                          std::vector<double>(n, zeta), direction_e);
}

CoefficientField CoefficientField::from_reaction(const PeriodicGrid& grid, double advection_q,
                                                 const Reaction& reaction, int direction_e) {
  return sampled(
      grid, advection_q, [&](double x) { return reaction.derivative_u(x, 0.0); },
      [&](double x) { return reaction.derivative_u(x, 1.0); }, direction_e);
}

CoefficientField CoefficientField::stability_field() const {
  return CoefficientField(grid_, advection_q_, zeta_, zeta_, direction_e_);
}

CoefficientField CoefficientField::with_direction(int direction_e) const {
  return CoefficientField(grid_, advection_q_, eta_, zeta_, direction_e);
}

}  // namespace frontspeed
