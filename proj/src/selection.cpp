#include "frontspeed/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frontspeed/errors.hpp"
#include "frontspeed/operator.hpp"
#include "frontspeed/scalar_search.hpp"

namespace frontspeed {
namespace {

constexpr double kUEdge = 1e-4;
constexpr double kUBand = 0.05;
constexpr int kGeometricPoints = 80;
constexpr int kUniformIntervals = 320;

// Logistic p = 1 / (1 + exp(t)) and 1 - p without cancellation.
void logistic(double t, double& p, double& one_minus_p) {
  if (t > 0.0) {
    const double et = std::exp(-t);
    p = et / (1.0 + et);
    one_minus_p = 1.0 / (1.0 + et);
  } else {
    const double et = std::exp(t);
    p = 1.0 / (1.0 + et);
    one_minus_p = et / (1.0 + et);
  }
}

double max_abs_eta_mismatch(const CoefficientField& coeffs, double value) {
  double m = 0.0;
  for (double v : coeffs.eta()) m = std::max(m, std::abs(v - value));
  return m;
}

struct TailCheck {
  double left_max;
  double right_min;
  double right_max;
};

TailCheck tails(const ProfileSamples& p) {
  const std::size_t nx = p.n_x;
  const std::size_t last = p.s.size() - 1;
  TailCheck t{0.0, std::numeric_limits<double>::infinity(), 0.0};
  for (std::size_t i = 0; i < nx; ++i) {
    t.left_max = std::max(t.left_max, p.phi[i]);
    t.right_min = std::min(t.right_min, p.phi[last * nx + i]);
    t.right_max = std::max(t.right_max, p.phi[last * nx + i]);
  }
  return t;
}

ProfileSamples sample_checked(const CandidateProfile& profile, const CoefficientField& coeffs,
                              const std::optional<SampleRectangle>& rect) {
  if (profile.n_nodes() != coeffs.size()) {
    throw InvalidArgument("candidate profile does not match the coefficient grid");
  }
  ProfileSamples samples = profile.sample(rect ? *rect : profile.default_rectangle());
  for (double v : samples.phi) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw InvalidArgument("candidate profile must be nonnegative and finite");
    }
  }
  const TailCheck t = tails(samples);
  if (t.left_max > kLeftTailMax) {
    throw TailNotResolved("left tail reaches only phi = " + format_number(t.left_max, 6) +
                          "; extend s_min until phi < 1e-6");
  }
  return samples;
}

}  // namespace

CandidateProfile CandidateProfile::sigmoid(Family family, std::vector<double> psi, double mu,
                                           double scale) {
  if (family == Family::custom) throw InvalidArgument("use from_callback for custom profiles");
  if (!(mu > 0.0)) throw InvalidArgument("decay rate must be positive");
  if (!(scale > 0.0 && scale <= 1.0)) throw InvalidArgument("scale must lie in (0, 1]");
  for (double v : psi) {
    if (!(v > 0.0)) throw InvalidArgument("eigenfunction samples must be positive");
  }
  CandidateProfile p;
  p.family = family;
  p.psi = std::move(psi);
  p.mu = mu;
  p.scale = scale;
  return p;
}

CandidateProfile CandidateProfile::from_callback(Callback callback, std::size_t n_nodes, double mu,
                                                 bool mu2_decay) {
  if (!callback) throw InvalidArgument("custom profile needs a callback");
  if (!(mu > 0.0)) throw InvalidArgument("decay rate must be positive");
  CandidateProfile p;
  p.family = Family::custom;
  p.psi.assign(n_nodes, 1.0);
  p.mu = mu;
  p.custom = std::move(callback);
  p.mu2_decay = mu2_decay;
  return p;
}

ProfilePoint CandidateProfile::at(double s, std::size_t node) const {
  if (family == Family::custom) return custom(s, node);
  // Psi / (Psi + e^{-mu s}) = 1 / (1 + e^{t}), t = -mu s - ln Psi.
  double p, q;
  logistic(-mu * s - std::log(psi[node]), p, q);
  const double ps = mu * p * q;
  return {scale * p, scale * ps, scale * mu * ps * (q - p)};
}

ProfileSamples CandidateProfile::sample(const SampleRectangle& rect) const {
  if (!(rect.s_max > rect.s_min) || rect.n_s < 2) throw InvalidArgument("empty sample rectangle");
  ProfileSamples out;
  const std::size_t nx = n_nodes();
  out.n_x = nx;
  out.s.resize(rect.n_s);
  out.phi.resize(rect.n_s * nx);
  out.phi_s.resize(rect.n_s * nx);
  out.phi_ss.resize(rect.n_s * nx);
  for (std::size_t is = 0; is < rect.n_s; ++is) {
    const double s =
        rect.s_min + (rect.s_max - rect.s_min) * static_cast<double>(is) / (rect.n_s - 1);
    out.s[is] = s;
    for (std::size_t i = 0; i < nx; ++i) {
      const ProfilePoint v = at(s, i);
      out.phi[is * nx + i] = v.phi;
      out.phi_s[is * nx + i] = v.phi_s;
      out.phi_ss[is * nx + i] = v.phi_ss;
    }
  }
  return out;
}

SampleRectangle CandidateProfile::default_rectangle() const {
  SampleRectangle r;
  r.s_min = std::log(1e-7) / mu;
  double psi_min = 1.0;
  for (double v : psi) psi_min = std::min(psi_min, v);
  r.s_max = (std::log(1e3) - std::log(psi_min)) / mu;
  return r;
}

std::vector<double> criterion_u_grid() {
  std::vector<double> u;
  u.reserve(2 * kGeometricPoints + kUniformIntervals + 1);
  const double ratio = std::log(kUBand / kUEdge);
  for (int j = 0; j < kGeometricPoints; ++j) {
    u.push_back(kUEdge * std::exp(ratio * j / kGeometricPoints));
  }
  for (int j = 0; j <= kUniformIntervals; ++j) {
    u.push_back(kUBand + (1.0 - 2.0 * kUBand) * j / kUniformIntervals);
  }
  for (int j = kGeometricPoints - 1; j >= 0; --j) {
    u.push_back(1.0 - kUEdge * std::exp(ratio * j / kGeometricPoints));
  }
  return u;
}

double criterion_value(const CoefficientField& coeffs, const Reaction& reaction, double mu,
                       std::span<const double> psi, std::span<const double> dpsi, double u,
                       std::size_t node) {
  const double e = coeffs.direction_e();
  const double x = coeffs.grid().node(node);
  const double p = psi[node];
  const double dp = dpsi[node];
  return -2.0 * mu * mu * u * p - 2.0 * u * dp * dp / p - 4.0 * mu * u * e * dp +
         p * reaction.evaluate(x, u) / (u * (1.0 - u)) - coeffs.eta()[node] * p;
}

CriterionGrid evaluate_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                                 double mu, std::span<const double> psi) {
  if (psi.size() != coeffs.size()) throw InvalidArgument("eigenfunction size mismatch");
  const auto dpsi = periodic_first_derivative(psi, coeffs.grid().spacing());
  const auto us = criterion_u_grid();
  CriterionGrid g;
  g.mu = mu;
  g.max = -std::numeric_limits<double>::infinity();
  g.min = std::numeric_limits<double>::infinity();
  g.samples.reserve(us.size() * coeffs.size());
  for (double u : us) {
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      const double v = criterion_value(coeffs, reaction, mu, psi, dpsi, u, i);
      g.samples.push_back({u, coeffs.grid().node(i), v});
      g.max = std::max(g.max, v);
      g.min = std::min(g.min, v);
    }
  }
  return g;
}

CriterionGrid linear_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                               const DispersionResult& dispersion) {
  return evaluate_criterion(coeffs, reaction, dispersion.mu_bar, dispersion.psi_bar);
}

CriterionGrid linear_criterion(const CoefficientField& coeffs, const Reaction& reaction) {
  return linear_criterion(coeffs, reaction, linear_speed(coeffs));
}

NonlinearTest nonlinear_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                                  const DispersionResult& dispersion, double epsilon,
                                  double epsilon_max) {
  if (!(epsilon > 0.0) || !(epsilon <= epsilon_max)) {
    throw InvalidArgument("epsilon must lie in (0, " + format_number(epsilon_max, 6) +
                          "], got " + format_number(epsilon, 6));
  }
  NonlinearTest t;
  t.epsilon = epsilon;
  t.c = dispersion.c0 + epsilon;
  const DecayRates d = decay_rates(coeffs, dispersion, t.c);
  t.mu2 = d.mu2;
  t.min_value = evaluate_criterion(coeffs, reaction, d.mu2, d.psi2).min;
  t.passed = t.min_value >= kSignTol;
  if (t.passed) t.lower_bound_c = t.c;
  return t;
}

NonlinearTest nonlinear_criterion(const CoefficientField& coeffs, const Reaction& reaction,
                                  double epsilon, double epsilon_max) {
  return nonlinear_criterion(coeffs, reaction, linear_speed(coeffs), epsilon, epsilon_max);
}

LadderResult nonlinear_ladder(const CoefficientField& coeffs, const Reaction& reaction,
                              const DispersionResult& dispersion, std::span<const double> ladder,
                              bool refine, int refine_steps) {
  std::vector<double> eps(ladder.begin(), ladder.end());
  std::sort(eps.begin(), eps.end());
  if (eps.empty()) throw InvalidArgument("epsilon ladder is empty");
  const double eps_max = eps.back();

  LadderResult r;
  std::optional<std::size_t> best_pass;
  for (std::size_t j = 0; j < eps.size(); ++j) {
    r.rungs.push_back(nonlinear_criterion(coeffs, reaction, dispersion, eps[j], eps_max));
    if (r.rungs.back().passed) best_pass = j;
  }
  if (!best_pass) {
    r.best = *std::max_element(r.rungs.begin(), r.rungs.end(),
                               [](const auto& a, const auto& b) { return a.min_value < b.min_value; });
    return r;
  }
  r.ladder_epsilon = eps[*best_pass];
  r.best = r.rungs[*best_pass];
  r.refined_epsilon = r.ladder_epsilon;
  if (!refine) return r;
  // First failing rung above the largest passing one, if any.
  std::optional<double> fail;
  for (std::size_t j = *best_pass + 1; j < eps.size(); ++j) {
    if (!r.rungs[j].passed) {
      fail = eps[j];
      break;
    }
  }
  if (!fail) return r;
  double lo = *r.ladder_epsilon, hi = *fail;
  for (int i = 0; i < refine_steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const NonlinearTest t = nonlinear_criterion(coeffs, reaction, dispersion, mid, eps_max);
    if (t.passed) {
      lo = mid;
      r.best = t;
    } else {
      hi = mid;
    }
  }
  r.refined_epsilon = lo;
  return r;
}

bool verify_upper_solution(const CandidateProfile& profile, double c,
                           const CoefficientField& coeffs, const Reaction& reaction,
                           std::optional<SampleRectangle> rect) {
  const ProfileSamples samples = sample_checked(profile, coeffs, rect);
  if (tails(samples).right_min < kRightTailMinUpper) return false;
  return evaluate_wave_operator(samples, c, coeffs, reaction).max <= kSignTol;
}

bool verify_lower_solution(const CandidateProfile& profile, double c,
                           const CoefficientField& coeffs, const Reaction& reaction,
                           std::optional<SampleRectangle> rect) {
  if (!profile.has_mu2_decay()) return false;
  const ProfileSamples samples = sample_checked(profile, coeffs, rect);
  if (tails(samples).right_max > kRightTailMaxLower) return false;
  return evaluate_wave_operator(samples, c, coeffs, reaction).min >= -kSignTol;
}

std::optional<double> upper_bound_speed(const CandidateProfile& profile, double c2,
                                        const CoefficientField& coeffs, const Reaction& reaction,
                                        std::optional<SampleRectangle> rect) {
  const DispersionResult d = linear_speed(coeffs);
  if (!(c2 > d.c0)) {
    throw InvalidArgument("c2 = " + format_number(c2, 15) + " must exceed c0 = " +
                          format_number(d.c0, 15));
  }
  if (!profile.has_mu2_decay()) return std::nullopt;
  const ProfileSamples samples = sample_checked(profile, coeffs, rect);
  for (double v : samples.phi) {
    if (v > 1.0) return std::nullopt;
  }
  if (evaluate_wave_operator(samples, c2, coeffs, reaction).max <= kSignTol) return c2;
  return std::nullopt;
}

std::pair<double, double> speed_bounds_kpp_allee(double q, double a_min, double a_max) {
  if (!(a_min > 2.0)) {
    throw DomainError("bounds need a(x) > 2 everywhere; min a = " + format_number(a_min, 15));
  }
  if (a_max < a_min) throw InvalidArgument("a_max below a_min");
  auto speed = [q](double a) { return q + std::sqrt(a / 2.0) + std::sqrt(2.0 / a); };
  return {speed(a_min), speed(a_max)};
}

bool kpp_condition_holds(const CoefficientField& coeffs, const Reaction& reaction) {
  const auto us = criterion_u_grid();
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    const double x = coeffs.grid().node(i);
    const double eta = coeffs.eta()[i];
    for (double u : us) {
      if (reaction.evaluate(x, u) > eta * u + 1e-12) return false;
    }
  }
  return true;
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::linear:
      return "linear";
    case Verdict::nonlinear:
      return "nonlinear";
    case Verdict::inconclusive:
      return "inconclusive";
  }
  return "unknown";
}

namespace {

// Smallest c2 on a ladder above `floor` at which the mu2(c2) criterion is
// <= 0, refined by bisection, then confirmed on the sampled rectangle.
void search_upper_bound(const CoefficientField& coeffs, const Reaction& reaction,
                        const DispersionResult& d, double floor, int steps,
                        SelectionReport& report) {
  auto passes = [&](double c2) {
    const DecayRates r = decay_rates(coeffs, d, c2);
    return evaluate_criterion(coeffs, reaction, r.mu2, r.psi2).max <= kSignTol;
  };
  double lo = floor;
  std::optional<double> hit;
  for (double delta : {0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0}) {
    const double c2 = d.c0 + delta;
    if (c2 <= floor) continue;
    if (passes(c2)) {
      hit = c2;
      break;
    }
    lo = c2;
  }
  if (!hit) return;
  const double coarse = *hit;
  double hi = coarse;
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  for (double c2 : {hi, coarse}) {
    const DecayRates r = decay_rates(coeffs, d, c2);
    const auto profile =
        CandidateProfile::sigmoid(CandidateProfile::Family::sigmoid_mu2, r.psi2, r.mu2);
    const ProfileSamples samples = profile.sample(profile.default_rectangle());
    if (evaluate_wave_operator(samples, c2, coeffs, reaction).max <= kSignTol) {
      report.upper_bound_c = c2;
      report.upper_solution_verified = true;
      return;
    }
  }
}

}  // namespace

SelectionReport select_mechanism(const CoefficientField& coeffs, const Reaction& reaction,
                                 const DispersionResult& d, const SelectionOptions& options) {
  SelectionReport r;
  r.c0 = d.c0;
  r.mu_bar = d.mu_bar;
  r.direction_e = coeffs.direction_e();
  r.shrink = options.shrink;

  r.kpp_shortcut = kpp_condition_holds(coeffs, reaction);
  r.linear_grid = linear_criterion(coeffs, reaction, d);
  r.criterion_max_linear = r.linear_grid.max;
  const bool linear_pass = r.criterion_max_linear <= kSignTol;

  std::vector<double> ladder;
  for (double eps : options.epsilon_ladder) {
    if (eps <= options.epsilon_max) ladder.push_back(eps);
  }
  const LadderResult lr =
      nonlinear_ladder(coeffs, reaction, d, ladder, options.refine, options.refine_steps);
  r.ladder = lr.rungs;
  r.ladder_epsilon = lr.ladder_epsilon;
  r.criterion_min_nonlinear = lr.best.min_value;
  r.epsilon_used = lr.best.epsilon;
  const bool nonlinear_pass = lr.refined_epsilon.has_value();

  if ((linear_pass || r.kpp_shortcut) && nonlinear_pass) {
    throw std::logic_error("linear and nonlinear criteria both pass; check the eigenpair");
  }

  if (r.kpp_shortcut || linear_pass) {
    r.verdict = Verdict::linear;
    r.lower_bound_c = d.c0;
    r.upper_bound_c = d.c0;
    const auto profile =
        CandidateProfile::sigmoid(CandidateProfile::Family::sigmoid_mu1, d.psi_bar, d.mu_bar);
    r.upper_solution_verified = verify_upper_solution(profile, d.c0, coeffs, reaction);
  } else if (nonlinear_pass) {
    r.verdict = Verdict::nonlinear;
    const DecayRates rates = decay_rates(coeffs, d, lr.best.c);
    r.nonlinear_grid = evaluate_criterion(coeffs, reaction, rates.mu2, rates.psi2);
    r.lower_bound_c = lr.best.c;
    // The shrink costs a margin of order shrink * eta, which the refined
    // epsilon (criterion min near the tolerance) may not have; fall back to
    // the ladder rung.
    for (double c : {lr.best.c, d.c0 + *lr.ladder_epsilon}) {
      const DecayRates rc = decay_rates(coeffs, d, c);
      const auto v = CandidateProfile::sigmoid(CandidateProfile::Family::sigmoid_mu2, rc.psi2,
                                               rc.mu2, 1.0 - options.shrink);
      if (verify_lower_solution(v, c, coeffs, reaction)) {
        r.lower_solution_verified = true;
        r.lower_solution_c = c;
        break;
      }
    }
    if (options.search_upper_bound) {
      search_upper_bound(coeffs, reaction, d, lr.best.c, options.refine_steps, r);
    }
  } else {
    r.verdict = Verdict::inconclusive;
  }

  if (reaction.kind() == Reaction::Kind::kpp_allee && max_abs_eta_mismatch(coeffs, 1.0) <= 1e-12) {
    const auto range =
        options.allee_range.value_or(std::make_pair(reaction.allee_min(), reaction.allee_max()));
    if (range.first > 2.0) {
      r.allee_bounds = speed_bounds_kpp_allee(coeffs.advection() * coeffs.direction_e(),
                                              range.first, range.second);
    }
  }
  return r;
}

SelectionReport select_mechanism(const CoefficientField& coeffs, const Reaction& reaction,
                                 const SelectionOptions& options) {
  return select_mechanism(coeffs, reaction, linear_speed(coeffs), options);
}

KeyValueBlock to_key_values(const SelectionReport& r) {
  KeyValueBlock kv;
  kv.add("verdict", to_string(r.verdict));
  kv.add("direction_e", r.direction_e);
  kv.add("c0", r.c0);
  kv.add("mu_bar", r.mu_bar);
  kv.add("kpp_shortcut", r.kpp_shortcut);
  kv.add("criterion_max_linear", r.criterion_max_linear);
  kv.add("criterion_min_nonlinear", r.criterion_min_nonlinear);
  kv.add("criterion_sign_tolerance", kSignTol);
  kv.add("epsilon_used", r.epsilon_used);
  kv.add("ladder_epsilon", r.ladder_epsilon ? format_number(*r.ladder_epsilon) : "none");
  kv.add("lower_bound_c", r.lower_bound_c ? format_number(*r.lower_bound_c) : "none");
  kv.add("upper_bound_c", r.upper_bound_c ? format_number(*r.upper_bound_c) : "none");
  kv.add("lower_solution_verified", r.lower_solution_verified);
  kv.add("upper_solution_verified", r.upper_solution_verified);
  kv.add("lower_solution_c", r.lower_solution_c ? format_number(*r.lower_solution_c) : "none");
  kv.add("shrink", r.shrink);
  if (r.allee_bounds) {
    kv.add("allee_bound_lower", r.allee_bounds->first);
    kv.add("allee_bound_upper", r.allee_bounds->second);
  } else {
    kv.add("allee_bounds", "not applicable");
  }
  for (std::size_t j = 0; j < r.ladder.size(); ++j) {
    const auto& t = r.ladder[j];
    const std::string p = "ladder." + std::to_string(j) + ".";
    kv.add(p + "epsilon", t.epsilon);
    kv.add(p + "mu2", t.mu2);
    kv.add(p + "min", t.min_value);
    kv.add(p + "passed", t.passed);
  }
  return kv;
}

std::vector<std::vector<double>> criterion_rows(const CriterionGrid& grid) {
  std::vector<std::vector<double>> rows;
  rows.reserve(grid.samples.size());
  for (const auto& s : grid.samples) rows.push_back({s.u, s.x, s.g});
  return rows;
}

}  // namespace frontspeed
