#pragma once

#include <cstddef>
#include <vector>

#include "frontspeed/coefficients.hpp"
#include "frontspeed/reaction.hpp"

namespace frontspeed {

// Candidate wave profile phi(s, x) sampled on an (s, node) rectangle with
// analytic s-derivatives. Storage is row-major: index = s_index * n_x + node.
struct ProfileSamples {
  std::vector<double> s;
  std::size_t n_x = 0;
  std::vector<double> phi;
  std::vector<double> phi_s;
  std::vector<double> phi_ss;

  std::size_t index(std::size_t is, std::size_t ix) const { return is * n_x + ix; }
};

struct WaveResidual {
  std::vector<double> s;
  std::size_t n_x = 0;
  std::vector<double> values;  // same layout as ProfileSamples
  double max = 0.0;
  double min = 0.0;

  double at(std::size_t is, std::size_t ix) const { return values[is * n_x + ix]; }
};

// R = phi_ss + phi_xx + 2 e phi_sx + q phi_x + (q e - c) phi_s + f(x, phi),
// x-derivatives by periodic central differences on the coefficient grid.
WaveResidual evaluate_wave_operator(const ProfileSamples& profile, double c,
                                    const CoefficientField& coeffs, const Reaction& reaction);

}  // namespace frontspeed
