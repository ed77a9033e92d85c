#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frontspeed/coefficients.hpp"
#include "frontspeed/reaction.hpp"
#include "frontspeed/report.hpp"

namespace frontspeed {

enum class Boundary { clamped, outflow };
enum class Scheme { imex, explicit_euler };
enum class Side { left, right };
enum class FrontClass { pulled, pushed, ambiguous };

const char* to_string(Boundary b);
const char* to_string(Scheme s);
const char* to_string(Side s);
const char* to_string(FrontClass c);

/// Truncated line [x_min, x_max] with n_points nodes (both ends included),
/// spacing (x_max - x_min) / (n_points - 1).
struct SimulationDomain {
  double x_min = 0.0;
  double x_max = 400.0;
  std::size_t n_points = 8192;
  double dt = 0.01;
  double t_end = 80.0;
  Boundary boundary = Boundary::clamped;
  Scheme scheme = Scheme::imex;

  double spacing() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double node(std::size_t i) const { return x_min + spacing() * static_cast<double>(i); }
  double extent() const { return x_max - x_min; }

  // Throws InvalidArgument unless the extent is a whole number of periods.
  void validate(double period_length) const;

  static SimulationDomain periods(double period_length, double n_periods, std::size_t n_points,
                                  double dt, double t_end, Boundary boundary = Boundary::clamped);
};

/// One time step of u_t = u_xx + q u_x + f(x, u) on a SimulationDomain.
///
/// IMEX: u* = u + dt f(x, u), then (I - dt (D2 + q D1)) u_new = u* with the
/// tridiagonal factorized once. Central differences; the implicit matrix
/// is an M-matrix with unit row sums when h |q| <= 2, so the step is
/// order preserving and maps [0, 1] into itself when dt max|f_u| <= 1.
/// Explicit: forward Euler on the full right-hand side, dt <= 0.4 h^2.
///
/// Clamped boundaries keep the end values fixed; outflow uses a mirrored
/// ghost node (zero gradient). With orientation -1 the medium is mirrored
/// (node x sees f(-x, u) and advection -q).
class Stepper {
 public:
  Stepper(const SimulationDomain& domain, const CoefficientField& coeffs, const Reaction& reaction,
          int orientation = 1);

  // Advances in place. Throws Instability if any value leaves [-0.1, 1.1];
  // values are then clamped to [0, 1].
  void step(std::vector<double>& u);

  // Extremes of the last step before clamping.
  double last_min() const { return last_min_; }
  double last_max() const { return last_max_; }

  const SimulationDomain& domain() const { return domain_; }
  double max_reaction_slope() const { return max_slope_; }

 private:
  SimulationDomain domain_;
  double q_;
  const Reaction* reaction_;
  std::vector<double> x_;
  // Thomas factors of the implicit matrix.
  std::vector<double> sub_, inv_pivot_, super_prime_;
  std::vector<double> rhs_, scratch_;
  double max_slope_ = 0.0;
  double last_min_ = 0.0;
  double last_max_ = 0.0;
};

// Single step on a fresh Stepper; for tests and one-off use.
std::vector<double> step(const std::vector<double>& u, const SimulationDomain& domain,
                         const CoefficientField& coeffs, const Reaction& reaction);

struct FrontOptions {
  double level = 0.5;
  double fit_fraction = 0.4;  // fit on the last fraction of [0, t_end]
  double decay_band_lo = 1e-8;
  double decay_band_hi = 1e-3;
  double start_offset_periods = 20.0;  // initial step distance from the trailing edge
  double edge_margin_periods = 10.0;
  double min_r_squared = 0.999;
  double class_tolerance = 0.10;
  // Within this relative band of c0 the rate is compared with mu_bar first,
  // then with mu2 of the measured speed.
  double linear_band = 0.02;
  std::size_t snapshot_stride = 0;  // steps between snapshots; 0 disables
};

struct FrontMeasurement {
  Side side = Side::left;
  double speed = 0.0;
  double level = 0.5;
  double decay_rate = 0.0;
  FrontClass classification = FrontClass::ambiguous;
  std::pair<double, double> fit_window{0.0, 0.0};
  double r_squared = 0.0;
  double c0 = 0.0;
  double mu1 = 0.0;  // roots at the measured speed; mu_bar when it is <= c0
  double mu2 = 0.0;
  bool near_linear = false;
  std::size_t decay_points = 0;
  std::vector<std::pair<double, double>> trajectory;  // (t, x_level)
  std::vector<std::vector<double>> snapshots;         // rows t, x, u
};

// Leftward spreading starts from data equal to 1 on the right (direction
// e = +1 of the coefficients); rightward from 1 on the left (e = -1).
// Throws FrontHitBoundary, FitRejected, Instability.
FrontMeasurement measure_spreading_speed(const SimulationDomain& domain,
                                         const CoefficientField& coeffs, const Reaction& reaction,
                                         Side side, const FrontOptions& options = {});

inline const std::vector<std::string> kSnapshotCsvHeader = {"t", "x", "u"};
KeyValueBlock to_key_values(const FrontMeasurement& m);

struct RecursionOptions {
  double omega = 0.5;           // ramp height
  double ramp_periods = 1.0;    // ramp width
  double left_periods = 30.0;   // domain extent left of the ramp foot
  double right_periods = 10.0;
  int cells_per_period = 16;
  double dt_max = 0.02;
  int n_max = 4000;
  double stabilization_tol = 1e-6;
  double subcritical_level = 0.9;
  double probe_periods = 10.0;  // leftmost periods examined for a -> 1
  // Edge value at or above which inflow from beyond the left edge copies it.
  double inflow_threshold = 1e-6;
  bool record_iterates = false;
};

struct RecursionCandidate {
  double c = 0.0;
  bool subcritical = false;
  bool stabilized = false;
  int iterations = 0;
  double probe_min = 0.0;
  double front_position = 0.0;  // leftmost crossing of (1 + omega) / 2
  std::vector<std::vector<double>> iterates;  // a_0, a_1, ... when recorded
};

// Iterates a_{n+1} = max(phi, T[Q_tau[a_n]]) in the frame moving with
// speed c against the spreading direction. Homogeneous media use tau = 1
// and a shift by c (linear interpolation); periodic media use
// tau = m L / c with a shift of exactly m periods, so the shift commutes
// with the coefficients. Throws std::logic_error if an iterate decreases.
RecursionCandidate classify_recursion_candidate(const CoefficientField& coeffs,
                                                const Reaction& reaction, double c,
                                                const RecursionOptions& options = {});

struct RecursionResult {
  double speed = 0.0;
  double c_lo = 0.0;
  double c_hi = 0.0;
  std::vector<RecursionCandidate> candidates;
};

// Bisection on c. Throws BracketInvalid if both ends classify alike.
RecursionResult weinberger_recursion(const CoefficientField& coeffs, const Reaction& reaction,
                                     double c_lo, double c_hi, double tol,
                                     const RecursionOptions& options = {});
double weinberger_recursion_speed(const CoefficientField& coeffs, const Reaction& reaction,
                                  double c_lo, double c_hi, double tol,
                                  const RecursionOptions& options = {});

KeyValueBlock to_key_values(const RecursionResult& r);

}  // namespace frontspeed
