#include "frontspeed/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "frontspeed/errors.hpp"

namespace frontspeed {

Reaction::Reaction(Kind kind, Function f, Function df, Profile a, bool homogeneous,
                   double period)
    : kind_(kind),
      f_(std::move(f)),
      df_(std::move(df)),
      a_(std::move(a)),
      homogeneous_(homogeneous),
      period_length_(period) {}

Reaction Reaction::kpp_allee(const PeriodicGrid& grid, Profile a, bool homogeneous) {
  if (!a) throw InvalidArgument("kpp_allee reaction needs a coefficient profile a(x)");
  const double period = grid.period_length();
  auto f = [a, period](double x, double u) {
    const double ax = a(x);
    return u * (1.0 - u) * (1.0 + ax * u);
  };
  auto df = [a](double x, double u) {
    const double ax = a(x);
    // d/du [u (1-u) (1 + a u)] = (1 - 2u)(1 + a u) + a u (1 - u)
    return (1.0 - 2.0 * u) * (1.0 + ax * u) + ax * u * (1.0 - u);
  };
  Reaction r(Kind::kpp_allee, std::move(f), std::move(df), std::move(a), homogeneous, period);
  r.a_min_ = std::numeric_limits<double>::infinity();
  r.a_max_ = -std::numeric_limits<double>::infinity();
  for (double x : grid.nodes()) {
    const double ax = r.a_(x);
    r.a_min_ = std::min(r.a_min_, ax);
    r.a_max_ = std::max(r.a_max_, ax);
  }
  if (r.a_max_ == r.a_min_) r.homogeneous_ = true;
  r.validate(grid);
  return r;
}

Reaction Reaction::kpp_allee(const PeriodicGrid& grid, double a) {
  return kpp_allee(grid, [a](double) { return a; }, true);
}

Reaction Reaction::tabulated(const PeriodicGrid& grid, Function f, Function df_du,
                             bool homogeneous) {
  if (!f || !df_du) throw InvalidArgument("tabulated reaction needs f and df/du callbacks");
  Reaction r(Kind::tabulated, std::move(f), std::move(df_du), {}, homogeneous,
             grid.period_length());
  r.validate(grid);
  return r;
}

double Reaction::allee_coefficient(double x) const {
  if (kind_ != Kind::kpp_allee) throw InvalidArgument("allee coefficient of a tabulated reaction");
  return a_(x);
}

void Reaction::validate(const PeriodicGrid& grid) const {
  for (double x : grid.nodes()) {
    const double f0 = f_(x, 0.0);
    const double f1 = f_(x, 1.0);
    if (std::abs(f0) > 1e-12 || std::abs(f1) > 1e-12) {
      throw InvalidArgument("reaction must vanish at u = 0 and u = 1 (x = " +
                            std::to_string(x) + ")");
    }
    for (int k = 0; k <= 20; ++k) {
      const double u = 0.05 * k;
      const double v = f_(x, u);
      if (!std::isfinite(v) || v < -1e-12) {
        throw InvalidArgument("reaction must be nonnegative on [0, 1] (x = " +
                              std::to_string(x) + ", u = " + std::to_string(u) + ")");
      }
    }
  }
}

}  // namespace frontspeed
