#include "frontspeed/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "frontspeed/eigen.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/operator.hpp"
#include "frontspeed/scalar_search.hpp"

namespace frontspeed {
namespace {

constexpr double kRootTol = 1e-11;

double k_at(const CoefficientField& coeffs, double lambda) {
  return k_of_lambda(coeffs, lambda).eigenvalue;
}

struct Bracket {
  double lo;
  double hi;
};

// Doubling from lambda = 1 until h = k / lambda rises on both flanks.
Bracket bracket_minimum(const CoefficientField& coeffs) {
  auto h = [&](double lambda) { return k_at(coeffs, lambda) / lambda; };
  const double limit = std::min(kLambdaMax, mesh_lambda_limit(coeffs));
  double left = 1.0, mid = std::min(2.0, limit);
  if (mid <= left) throw BracketNotFound("mesh limit on lambda is below 2; refine the grid");
  double h_left = h(left), h_mid = h(mid);
  if (h_mid < h_left) {
    while (true) {
      const double right = 2.0 * mid;
      if (right > limit) {
        if (mid >= limit) break;
        const double h_edge = h(limit);
        if (h_edge > h_mid) return {left, limit};
        break;
      }
      const double h_right = h(right);
      if (h_right > h_mid) return {left, right};
      left = mid;
      mid = right;
      h_mid = h_right;
    }
    throw BracketNotFound("k(lambda)/lambda decreasing up to lambda = " + std::to_string(limit));
  }
  double right = mid;
  mid = left;
  while (true) {
    const double lower = 0.5 * mid;
    if (lower < kLambdaMin) break;
    const double h_lower = h(lower);
    if (h_lower > h_left) return {lower, right};
    right = mid;
    mid = lower;
    h_left = h_lower;
  }
  throw BracketNotFound("k(lambda)/lambda increasing down to lambda = " + std::to_string(kLambdaMin));
}

// Golden section leaves the argmin uncertain to ~sqrt(eps) because k/lambda is
// flat there. The stationarity condition lambda k'(lambda) = k(lambda) has a
// simple root, so bisecting on it pins mu_bar to rounding level.
double refine_minimizer(const CoefficientField& coeffs, double guess, const Bracket& b) {
  auto g = [&](double lambda) { return lambda * dk_dlambda(coeffs, lambda) - k_at(coeffs, lambda); };
  double delta = 1e-6 * guess;
  double lo = guess, hi = guess;
  for (int i = 0; i < 60; ++i) {
    lo = std::max(b.lo, guess - delta);
    hi = std::min(b.hi, guess + delta);
    if (g(lo) < 0.0 && g(hi) > 0.0) break;
    if (lo == b.lo && hi == b.hi) return guess;
    delta *= 2.0;
  }
  if (!(g(lo) < 0.0 && g(hi) > 0.0)) return guess;
  return bisect_root(g, lo, hi, 1e-13 * guess);
}

}  // namespace

double dk_dlambda(const CoefficientField& coeffs, double lambda) {
  const auto right = k_of_lambda(coeffs, lambda);
  const auto a = assemble_operator(coeffs, right.lambda);
  const auto left = principal_eigenpair(transpose(a));
  const std::size_t n = a.size();
  const double e = coeffs.direction_e();
  const double h = a.spacing;
  const auto& psi = right.eigenfunction;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t im = (i == 0) ? n - 1 : i - 1;
    const std::size_t ip = (i + 1 == n) ? 0 : i + 1;
    const double d_psi = e * (psi[ip] - psi[im]) / h +
                         (2.0 * right.lambda + coeffs.advection_q()[i] * e) * psi[i];
    num += left.eigenfunction[i] * d_psi;
    den += left.eigenfunction[i] * psi[i];
  }
  return num / den;
}

double mesh_lambda_limit(const CoefficientField& coeffs) {
  const double h = coeffs.grid().spacing();
  double qmax = 0.0;
  for (double q : coeffs.advection_q()) qmax = std::max(qmax, std::abs(q));
  return std::max(0.0, (2.0 / h - qmax) / 2.0);
}

DispersionResult linear_speed(const CoefficientField& coeffs, const DispersionOptions& options) {
  DispersionResult r;
  r.direction_e = coeffs.direction_e();
  r.k0 = k_at(coeffs, 0.0);
  if (!(r.k0 > options.k0_floor)) {
    throw AssumptionViolated("k(0) <= 0: k(0) = " + format_number(r.k0, 15) +
                             " (floor " + format_number(options.k0_floor, 3) + ")");
  }
  r.k0_marginal = r.k0 <= options.k0_warning_band;

  const Bracket b = options.bracket ? Bracket{options.bracket->first, options.bracket->second}
                                    : bracket_minimum(coeffs);
  const auto best = golden_section_minimize(
      [&](double lambda) { return k_at(coeffs, lambda) / lambda; }, b.lo, b.hi, options.lambda_tol);
  const auto pair = k_of_lambda(coeffs, refine_minimizer(coeffs, best.argmin, b));
  r.mu_bar = pair.lambda;
  r.c0 = pair.eigenvalue / pair.lambda;
  r.psi_bar = pair.eigenfunction;
  r.golden_evaluations = best.evaluations;

  const double limit = mesh_lambda_limit(coeffs);
  for (int j = 1; j <= options.sweep_points; ++j) {
    const double lambda = r.mu_bar * j / 10.0;
    if (lambda > limit) break;
    r.k_samples.emplace_back(lambda, k_at(coeffs, lambda));
  }
  r.convexity_ok = r.k_samples.size() >= 5 ? convexity_diagnostic(r.k_samples) : false;
  r.kbar0 = stability_check(coeffs);
  return r;
}

DecayRates decay_rates(const CoefficientField& coeffs, const DispersionResult& dispersion, double c) {
  if (!(c > dispersion.c0 + 1e-12)) {
    throw SpeedBelowLinear("speed " + format_number(c, 15) + " is not above c0 = " +
                           format_number(dispersion.c0, 15));
  }
  auto g = [&](double lambda) { return k_at(coeffs, lambda) - c * lambda; };
  const double mu_bar = dispersion.mu_bar;

  DecayRates d;
  d.c = c;
  d.mu1 = bisect_root(g, kLambdaMin, mu_bar, kRootTol);

  const double limit = std::min(kLambdaMax, mesh_lambda_limit(coeffs));
  double hi = 2.0 * mu_bar;
  while (true) {
    if (hi > limit) {
      hi = limit;
      if (!(g(hi) > 0.0)) {
        throw BracketNotFound("k(lambda) - c lambda stays negative up to lambda = " +
                              format_number(limit, 6));
      }
      break;
    }
    if (g(hi) > 0.0) break;
    hi *= 2.0;
  }
  d.mu2 = bisect_root(g, mu_bar, hi, kRootTol);
  d.psi1 = k_of_lambda(coeffs, d.mu1).eigenfunction;
  d.psi2 = k_of_lambda(coeffs, d.mu2).eigenfunction;
  return d;
}

DecayRates decay_rates(const CoefficientField& coeffs, double c) {
  return decay_rates(coeffs, linear_speed(coeffs), c);
}

double stability_check(const CoefficientField& coeffs) {
  return kbar_of_gamma(coeffs, 0.0).eigenvalue;
}

Stability classify_stability(double kbar0) {
  if (std::abs(kbar0) <= kDegenerateBand) return Stability::degenerate;
  if (kbar0 < 0.0) return Stability::exponentially_stable;
  return Stability::unstable;
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::exponentially_stable:
      return "exponentially_stable";
    case Stability::degenerate:
      return "degenerate";
    case Stability::unstable:
      return "unstable";
  }
  return "unknown";
}

bool convexity_diagnostic(std::span<const std::pair<double, double>> samples) {
  if (samples.size() < 5) throw InvalidArgument("convexity diagnostic needs at least 5 points");
  for (std::size_t i = 1; i + 1 < samples.size(); ++i) {
    const auto [x0, k0] = samples[i - 1];
    const auto [x1, k1] = samples[i];
    const auto [x2, k2] = samples[i + 1];
    if (!(x0 < x1 && x1 < x2)) throw InvalidArgument("lambda grid must be increasing");
    // Reduces to k2 - 2 k1 + k0 on a uniform grid.
    const double second = (k2 - k1) - (x2 - x1) / (x1 - x0) * (k1 - k0);
    if (second < -1e-8) return false;
  }
  return true;
}

bool convexity_diagnostic(const CoefficientField& coeffs, std::span<const double> lambda_grid) {
  if (lambda_grid.size() < 5) throw InvalidArgument("convexity diagnostic needs at least 5 points");
  std::vector<std::pair<double, double>> samples;
  samples.reserve(lambda_grid.size());
  for (double lambda : lambda_grid) samples.emplace_back(lambda, k_at(coeffs, lambda));
  return convexity_diagnostic(samples);
}

std::vector<std::vector<double>> dispersion_sweep(const CoefficientField& coeffs,
                                                  std::span<const double> lambdas) {
  std::vector<std::vector<double>> rows;
  rows.reserve(lambdas.size());
  for (double lambda : lambdas) {
    const double k = k_at(coeffs, lambda);
    rows.push_back({lambda, k, lambda != 0.0 ? k / lambda : std::nan("")});
  }
  return rows;
}

KeyValueBlock to_key_values(const DispersionResult& r) {
  KeyValueBlock kv;
  kv.add("direction_e", r.direction_e);
  kv.add("c0", r.c0);
  kv.add("c0_tolerance", "golden-section lambda width 1e-10");
  kv.add("mu_bar", r.mu_bar);
  kv.add("k0", r.k0);
  kv.add("k0_floor", 1e-10);
  kv.add("k0_marginal", r.k0_marginal);
  kv.add("kbar0", r.kbar0);
  kv.add("stability", to_string(classify_stability(r.kbar0)));
  kv.add("convexity_ok", r.convexity_ok);
  kv.add("convexity_tolerance", 1e-8);
  kv.add("k_samples", static_cast<unsigned long>(r.k_samples.size()));
  return kv;
}

}  // namespace frontspeed
