#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "frontspeed/coefficients.hpp"
#include "frontspeed/report.hpp"

namespace frontspeed {

// Search window for lambda; outside it the analysis fails instead of extrapolating.
inline constexpr double kLambdaMin = 1e-8;
inline constexpr double kLambdaMax = 1e6;

struct DispersionOptions {
  double lambda_tol = 1e-10;       // golden-section width on lambda
  double k0_floor = 1e-10;         // k(0) must exceed this
  double k0_warning_band = 1e-6;   // k(0) in (floor, band] is flagged marginal
  int sweep_points = 40;           // lambda = mu_bar * j / 10, j = 1..sweep_points
  // Overrides the doubling search; must contain the minimizer.
  std::optional<std::pair<double, double>> bracket;
};

/// Linear spreading speed c0 = min_{lambda > 0} k(lambda) / lambda and its
/// minimizer mu_bar, with the k(lambda) sweep and stability/convexity checks.
struct DispersionResult {
  double c0 = 0.0;
  double mu_bar = 0.0;
  std::vector<std::pair<double, double>> k_samples;  // (lambda, k)
  double k0 = 0.0;
  bool k0_marginal = false;
  double kbar0 = 0.0;
  bool convexity_ok = false;
  int direction_e = 1;
  std::vector<double> psi_bar;  // eigenfunction at mu_bar
  int golden_evaluations = 0;
};

struct DecayRates {
  double c = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::vector<double> psi1;
  std::vector<double> psi2;
};

// |kbar(0)| at or below this is reported as degenerate.
inline constexpr double kDegenerateBand = 1e-10;

enum class Stability { exponentially_stable, degenerate, unstable };

// Throws AssumptionViolated if k(0) <= floor, BracketNotFound if k/lambda is
// monotone over the search window.
DispersionResult linear_speed(const CoefficientField& coeffs, const DispersionOptions& options = {});

// Roots mu1 < mu_bar < mu2 of k(lambda) = c lambda. Throws SpeedBelowLinear if c <= c0.
DecayRates decay_rates(const CoefficientField& coeffs, const DispersionResult& dispersion, double c);
DecayRates decay_rates(const CoefficientField& coeffs, double c);

// kbar(0), the principal eigenvalue with eta replaced by zeta.
double stability_check(const CoefficientField& coeffs);
Stability classify_stability(double kbar0);
const char* to_string(Stability s);

// True iff the second differences of k over `lambda_grid` (>= 5 points,
// increasing) are all >= -1e-8.
bool convexity_diagnostic(const CoefficientField& coeffs, std::span<const double> lambda_grid);
bool convexity_diagnostic(std::span<const std::pair<double, double>> samples);

// dk/dlambda from the left and right Perron vectors: <w, A'(lambda) psi> / <w, psi>.
double dk_dlambda(const CoefficientField& coeffs, double lambda);

// Largest lambda for which the central stencil keeps nonnegative off-diagonals.
double mesh_lambda_limit(const CoefficientField& coeffs);

// Rows (lambda, k, k/lambda) for the CSV export.
std::vector<std::vector<double>> dispersion_sweep(const CoefficientField& coeffs,
                                                  std::span<const double> lambdas);
inline const std::vector<std::string> kDispersionCsvHeader = {"lambda", "k", "k_over_lambda"};

KeyValueBlock to_key_values(const DispersionResult& result);

}  // namespace frontspeed
