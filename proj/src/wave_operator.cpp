#include "frontspeed/wave_operator.hpp"

#include <algorithm>
#include <limits>

#include "frontspeed/errors.hpp"

namespace frontspeed {

WaveResidual evaluate_wave_operator(const ProfileSamples& profile, double c,
                                    const CoefficientField& coeffs, const Reaction& reaction) {
  const std::size_t nx = coeffs.size();
  const std::size_t ns = profile.s.size();
  if (profile.n_x != nx || profile.phi.size() != ns * nx || profile.phi_s.size() != ns * nx ||
      profile.phi_ss.size() != ns * nx) {
    throw InvalidArgument("profile samples do not match the coefficient grid");
  }
  const double h = coeffs.grid().spacing();
  const double e = coeffs.direction_e();
  const double inv_h2 = 1.0 / (h * h);
  const double inv_2h = 1.0 / (2.0 * h);
  const auto& nodes = coeffs.grid().nodes();

  WaveResidual r;
  r.s = profile.s;
  r.n_x = nx;
  r.values.resize(ns * nx);
  r.max = -std::numeric_limits<double>::infinity();
  r.min = std::numeric_limits<double>::infinity();
  for (std::size_t is = 0; is < ns; ++is) {
    const double* phi = &profile.phi[is * nx];
    const double* phi_s = &profile.phi_s[is * nx];
    const double* phi_ss = &profile.phi_ss[is * nx];
    for (std::size_t i = 0; i < nx; ++i) {
      const std::size_t im = (i == 0) ? nx - 1 : i - 1;
      const std::size_t ip = (i + 1 == nx) ? 0 : i + 1;
      const double q = coeffs.advection_q()[i];
      const double phi_x = (phi[ip] - phi[im]) * inv_2h;
      const double phi_xx = ((phi[ip] - phi[i]) - (phi[i] - phi[im])) * inv_h2;
      const double phi_sx = (phi_s[ip] - phi_s[im]) * inv_2h;
      const double value = phi_ss[i] + phi_xx + 2.0 * e * phi_sx + q * phi_x +
                           (q * e - c) * phi_s[i] + reaction.evaluate(nodes[i], phi[i]);
      r.values[is * nx + i] = value;
      r.max = std::max(r.max, value);
      r.min = std::min(r.min, value);
    }
  }
  return r;
}

}  // namespace frontspeed
