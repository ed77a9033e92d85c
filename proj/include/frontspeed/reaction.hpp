#pragma once

#include <functional>
#include <vector>

#include "frontspeed/grid.hpp"

namespace frontspeed {

/// Reaction term f(x, u) on u in [0, 1].
///
/// Construction checks f(x,0) = f(x,1) = 0 (to 1e-12) and f >= 0 at every
/// grid node for u in {0, 0.05, ..., 1}.
class Reaction {
 public:
  enum class Kind { kpp_allee, tabulated };
  using Function = std::function<double(double x, double u)>;
  using Profile = std::function<double(double x)>;

  // f = u (1 - u) (1 + a(x) u) with a L-periodic.
  static Reaction kpp_allee(const PeriodicGrid& grid, Profile a, bool homogeneous = false);
  static Reaction kpp_allee(const PeriodicGrid& grid, double a);

  // Arbitrary callbacks; `homogeneous` asserts f does not depend on x.
  static Reaction tabulated(const PeriodicGrid& grid, Function f, Function df_du,
                            bool homogeneous = false);

  double evaluate(double x, double u) const { return f_(x, u); }
  double derivative_u(double x, double u) const { return df_(x, u); }

  Kind kind() const { return kind_; }
  bool is_homogeneous() const { return homogeneous_; }

  // a(x) of the kpp_allee family; throws for other kinds.
  double allee_coefficient(double x) const;
  // Extrema of a over the grid nodes (kpp_allee only).
  double allee_min() const { return a_min_; }
  double allee_max() const { return a_max_; }

  double period_length() const { return period_length_; }

 private:
  Reaction(Kind kind, Function f, Function df, Profile a, bool homogeneous, double period);
  void validate(const PeriodicGrid& grid) const;

  Kind kind_;
  Function f_;
  Function df_;
  Profile a_;
  bool homogeneous_;
  double period_length_;
  double a_min_ = 0.0;
  double a_max_ = 0.0;
};

}  // namespace frontspeed
