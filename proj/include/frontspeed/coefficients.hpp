#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "frontspeed/grid.hpp"

namespace frontspeed {

class Reaction;

/// Node samples of the periodic coefficients of the linearized problem:
/// advection q, eta = df/du at u = 0, zeta = df/du at u = 1, and the
/// propagation direction e = +1 or -1.
///
/// In one dimension a divergence-free advection field is constant, so a
/// non-constant advection sample vector is rejected.
class CoefficientField {
 public:
  using Function = std::function<double(double)>;

  CoefficientField(PeriodicGrid grid, std::vector<double> advection_q,
                   std::vector<double> eta, std::vector<double> zeta, int direction_e);

  // Samples each closure once at the grid nodes.
  static CoefficientField sampled(const PeriodicGrid& grid, double advection_q,
                                  const Function& eta, const Function& zeta,
                                  int direction_e = +1);

  static CoefficientField constant(const PeriodicGrid& grid, double advection_q, double eta,
                                   double zeta, int direction_e = +1);

  // eta and zeta taken from df/du of the reaction at u = 0 and u = 1.
  static CoefficientField from_reaction(const PeriodicGrid& grid, double advection_q,
                                        const Reaction& reaction, int direction_e = +1);

  const PeriodicGrid& grid() const { return grid_; }
  const std::vector<double>& advection_q() const { return advection_q_; }
  const std::vector<double>& eta() const { return eta_; }
  const std::vector<double>& zeta() const { return zeta_; }
  int direction_e() const { return direction_e_; }
  double advection() const { return advection_q_.front(); }
  std::size_t size() const { return eta_.size(); }

  // Same field with eta replaced by zeta (stability operator).
  CoefficientField stability_field() const;
  CoefficientField with_direction(int direction_e) const;

  // Stable across runs; used as a memoization key.
  std::uint64_t hash() const { return hash_; }

 private:
  PeriodicGrid grid_;
  std::vector<double> advection_q_;
  std::vector<double> eta_;
  std::vector<double> zeta_;
  int direction_e_;
  std::uint64_t hash_;
};

}  // namespace frontspeed
