#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "frontspeed/coefficients.hpp"
#include "frontspeed/dispersion.hpp"
#include "frontspeed/reaction.hpp"
#include "frontspeed/report.hpp"
#include "frontspeed/wave_operator.hpp"

namespace frontspeed {

// One-sided tolerance for the sign tests on the criterion and the residual:
// "<= 0" passes at <= +kSignTol, "> 0" requires >= +kSignTol.
inline constexpr double kSignTol = 1e-9;

// Tail thresholds for candidate profiles on the sampled rectangle.
inline constexpr double kLeftTailMax = 1e-6;
inline constexpr double kRightTailMinUpper = 0.01;
inline constexpr double kRightTailMaxLower = 1.0 - 1e-3;

struct ProfilePoint {
  double phi = 0.0;
  double phi_s = 0.0;
  double phi_ss = 0.0;
};

struct SampleRectangle {
  double s_min = 0.0;
  double s_max = 0.0;
  std::size_t n_s = 801;
};

/// Candidate wave profile phi(s, x_i) on the coefficient grid.
///
/// The sigmoid families are scale * Psi / (Psi + exp(-mu s)) with Psi the
/// eigenfunction samples (max 1). A custom profile supplies values and
/// s-derivatives through a callback and may declare a mu2-type decay.
struct CandidateProfile {
  enum class Family { sigmoid_mu1, sigmoid_mu2, custom };
  using Callback = std::function<ProfilePoint(double s, std::size_t node)>;

  Family family = Family::sigmoid_mu1;
  std::vector<double> psi;
  double mu = 0.0;
  double scale = 1.0;
  Callback custom;
  bool mu2_decay = false;

  static CandidateProfile sigmoid(Family family, std::vector<double> psi, double mu,
                                  double scale = 1.0);
  static CandidateProfile from_callback(Callback callback, std::size_t n_nodes, double mu,
                                        bool mu2_decay);

  bool has_mu2_decay() const { return family == Family::sigmoid_mu2 || mu2_decay; }
  std::size_t n_nodes() const { return psi.size(); }

  ProfilePoint at(double s, std::size_t node) const;
  ProfileSamples sample(const SampleRectangle& rect) const;

  // s from ln(1e-7)/mu to where the profile is within 1e-3 of its upper value.
  SampleRectangle default_rectangle() const;
};

// u-grid for the criteria: geometric near 0 and 1, uniform in between;
// 1e-4 .. 1 - 1e-4, symmetric, 481 points.
std::vector<double> criterion_u_grid();

struct CriterionSample {
  double u;
  double x;
  double g;
};

struct CriterionGrid {
  double mu = 0.0;
  double max = 0.0;
  double min = 0.0;
  std::vector<CriterionSample> samples;
};

// G(u, x) = -2 mu^2 u Psi - 2 u Psi'^2 / Psi - 4 mu u e Psi' + Psi f(x,u) / (u (1-u)) - eta Psi
// on criterion_u_grid() x nodes. Psi' by periodic central differences.
CriterionGrid evaluate_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                                 double mu, std::span<const double> psi);
double criterion_value(const CoefficientField& coeffs, const Reaction& reaction, double mu,
                       std::span<const double> psi, std::span<const double> dpsi, double u,
                       std::size_t node);

// Criterion at mu1 = mu_bar, c = c0. Passes when max <= kSignTol.
CriterionGrid linear_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                               const DispersionResult& dispersion);
CriterionGrid linear_criterion(const CoefficientField& coeffs, const Reaction& reaction);

struct NonlinearTest {
  double epsilon = 0.0;
  double c = 0.0;
  double mu2 = 0.0;
  double min_value = 0.0;
  bool passed = false;
  std::optional<double> lower_bound_c;  // c0 + epsilon when passed
};

// Criterion at mu2(c0 + epsilon). Throws InvalidArgument unless 0 < epsilon <= epsilon_max.
NonlinearTest nonlinear_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                                  const DispersionResult& dispersion, double epsilon,
                                  double epsilon_max = 0.5);
NonlinearTest nonlinear_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                                  double epsilon, double epsilon_max = 0.5);

inline const std::vector<double> kEpsilonLadder = {1e-3, 1e-2, 0.05, 0.1, 0.2, 0.5};

struct LadderResult {
  std::vector<NonlinearTest> rungs;
  std::optional<double> ladder_epsilon;   // largest passing rung
  std::optional<double> refined_epsilon;  // bisection between that rung and the next
  NonlinearTest best;                     // test at the certified epsilon, or the best failure
};

LadderResult nonlinear_ladder(const CoefficientField& coeffs, const Reaction& reaction,
                              const DispersionResult& dispersion,
                              std::span<const double> ladder, bool refine = true,
                              int refine_steps = 30);

// Residual <= kSignTol on the rectangle, left tail <= 1e-6, right tail >= 0.01.
// Throws TailNotResolved if the rectangle does not reach the left tail.
bool verify_upper_solution(const CandidateProfile& profile, double c,
                           const CoefficientField& coeffs, const Reaction& reaction,
                           std::optional<SampleRectangle> rect = std::nullopt);

// Needs a mu2 decay tag and right tail <= 1 - 1e-3; residual >= -kSignTol.
bool verify_lower_solution(const CandidateProfile& profile, double c,
                           const CoefficientField& coeffs, const Reaction& reaction,
                           std::optional<SampleRectangle> rect = std::nullopt);

// c2 when `profile` (mu2(c2)-decaying, bounded by 1) is an upper solution at c2.
// Throws InvalidArgument if c2 <= c0.
std::optional<double> upper_bound_speed(const CandidateProfile& profile, double c2,
                                        const CoefficientField& coeffs, const Reaction& reaction,
                                        std::optional<SampleRectangle> rect = std::nullopt);

// (q + sqrt(m/2) + sqrt(2/m), q + sqrt(M/2) + sqrt(2/M)); DomainError if a_min <= 2.
std::pair<double, double> speed_bounds_kpp_allee(double q, double a_min, double a_max);

// f(x, u) <= eta(x) u on the criterion grid (to 1e-12).
bool kpp_condition_holds(const CoefficientField& coeffs, const Reaction& reaction);

enum class Verdict { linear, nonlinear, inconclusive };
const char* to_string(Verdict v);

struct SelectionOptions {
  std::vector<double> epsilon_ladder = kEpsilonLadder;
  double epsilon_max = 0.5;
  double shrink = 0.01;
  bool refine = true;
  int refine_steps = 30;
  bool search_upper_bound = true;
  // Extrema of a(x) used for the closed-form bounds; default is the node extrema.
  std::optional<std::pair<double, double>> allee_range;
};

struct SelectionReport {
  Verdict verdict = Verdict::inconclusive;
  double c0 = 0.0;
  double mu_bar = 0.0;
  int direction_e = 1;
  bool kpp_shortcut = false;
  double criterion_max_linear = 0.0;
  double criterion_min_nonlinear = 0.0;
  std::optional<double> lower_bound_c;
  std::optional<double> upper_bound_c;
  double epsilon_used = 0.0;
  std::optional<double> ladder_epsilon;
  bool lower_solution_verified = false;
  // Speed at which the shrunken mu2 sigmoid passed the lower-solution check.
  std::optional<double> lower_solution_c;
  bool upper_solution_verified = false;
  std::optional<std::pair<double, double>> allee_bounds;
  std::vector<NonlinearTest> ladder;
  CriterionGrid linear_grid;
  CriterionGrid nonlinear_grid;
  double shrink = 0.01;
};

SelectionReport select_mechanism(const CoefficientField& coeffs, const Reaction& reaction,
                                 const SelectionOptions& options = {});
SelectionReport select_mechanism(const CoefficientField& coeffs, const Reaction& reaction,
                                 const DispersionResult& dispersion,
                                 const SelectionOptions& options = {});

KeyValueBlock to_key_values(const SelectionReport& report);

inline const std::vector<std::string> kCriterionCsvHeader = {"u", "x", "G"};
std::vector<std::vector<double>> criterion_rows(const CriterionGrid& grid);

}  // namespace frontspeed
