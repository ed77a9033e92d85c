#include "frontspeed/semiflow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "frontspeed/dispersion.hpp"
#include "frontspeed/errors.hpp"

namespace frontspeed {
namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return f;
}

// Level crossing nearest to the leading edge; NaN if u never reaches the level.
double level_position(const std::vector<double>& u, const SimulationDomain& d, double level,
                      Side side) {
  const double h = d.spacing();
  const std::size_t n = u.size();
  if (side == Side::left) {
    for (std::size_t j = 0; j + 1 < n; ++j) {
      if (u[j] < level && u[j + 1] >= level) {
        return d.node(j) + h * (level - u[j]) / (u[j + 1] - u[j]);
      }
    }
  } else {
    for (std::size_t j = n - 1; j > 0; --j) {
      if (u[j] < level && u[j - 1] >= level) {
        return d.node(j) - h * (level - u[j]) / (u[j - 1] - u[j]);
      }
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void check_period_multiple(double extent, double period) {
  const double ratio = extent / period;
  if (std::abs(ratio - std::round(ratio)) > 1e-9 * std::max(1.0, ratio)) {
    throw InvalidArgument("domain extent " + format_number(extent, 12) +
                          " is not a whole number of periods of length " +
                          format_number(period, 12));
  }
}

}  // namespace

const char* to_string(Boundary b) { return b == Boundary::clamped ? "clamped" : "outflow"; }
const char* to_string(Scheme s) { return s == Scheme::imex ? "imex" : "explicit"; }
const char* to_string(Side s) { return s == Side::left ? "left" : "right"; }
const char* to_string(FrontClass c) {
  switch (c) {
    case FrontClass::pulled:
      return "pulled";
    case FrontClass::pushed:
      return "pushed";
    case FrontClass::ambiguous:
      return "ambiguous";
  }
  return "unknown";
}

void SimulationDomain::validate(double period_length) const {
  if (!(x_max > x_min)) throw InvalidArgument("empty simulation domain");
  if (n_points < 3) throw InvalidArgument("simulation needs at least 3 points");
  if (!(dt > 0.0) || !(t_end > 0.0)) throw InvalidArgument("dt and t_end must be positive");
  check_period_multiple(extent(), period_length);
}

SimulationDomain SimulationDomain::periods(double period_length, double n_periods,
                                           std::size_t n_points, double dt, double t_end,
                                           Boundary boundary) {
  SimulationDomain d;
  d.x_min = 0.0;
  d.x_max = period_length * n_periods;
  d.n_points = n_points;
  d.dt = dt;
  d.t_end = t_end;
  d.boundary = boundary;
  return d;
}

Stepper::Stepper(const SimulationDomain& domain, const CoefficientField& coeffs,
                 const Reaction& reaction, int orientation)
    : domain_(domain), q_(coeffs.advection() * orientation), reaction_(&reaction) {
  if (orientation != 1 && orientation != -1) throw InvalidArgument("orientation must be +1 or -1");
  domain_.validate(coeffs.grid().period_length());
  const std::size_t n = domain_.n_points;
  const double h = domain_.spacing();
  const double dt = domain_.dt;
  if (h * std::abs(q_) > 2.0) {
    throw InvalidArgument("cell Peclet number h|q|/2 exceeds 1; refine the simulation grid");
  }
  x_.resize(n);
  for (std::size_t i = 0; i < n; ++i) x_[i] = orientation * domain_.node(i);

  // Largest |f_u| over one period of nodes; the explicit reaction update is
  // order preserving when dt * max|f_u| <= 1.
  const std::size_t per_period = std::min<std::size_t>(
      n, static_cast<std::size_t>(std::ceil(coeffs.grid().period_length() / h)) + 1);
  for (std::size_t i = 0; i < per_period; ++i) {
    for (int k = 0; k <= 20; ++k) {
      max_slope_ = std::max(max_slope_, std::abs(reaction.derivative_u(domain_.node(i), k / 20.0)));
    }
  }
  if (dt * max_slope_ > 1.0) {
    throw InvalidArgument("dt * max|f_u| = " + format_number(dt * max_slope_, 6) + " exceeds 1");
  }

  if (domain_.scheme == Scheme::explicit_euler) {
    if (dt > 0.4 * h * h) {
      throw InvalidArgument("explicit scheme needs dt <= 0.4 h^2 = " + format_number(0.4 * h * h, 6));
    }
  } else {
    if (q_ != 0.0 && dt > 0.5 * h / std::abs(q_)) {
      throw InvalidArgument("dt exceeds 0.5 h / |q| = " + format_number(0.5 * h / std::abs(q_), 6));
    }
    const double w = dt / (h * h);
    const double adv = dt * q_ / (2.0 * h);
    std::vector<double> sub(n), diag(n), super(n);
    for (std::size_t i = 0; i < n; ++i) {
      sub[i] = -(w - adv);
      diag[i] = 1.0 + 2.0 * w;
      super[i] = -(w + adv);
    }
    if (domain_.boundary == Boundary::clamped) {
      diag[0] = diag[n - 1] = 1.0;
      super[0] = 0.0;
      sub[n - 1] = 0.0;
    } else {
      super[0] = -2.0 * w;
      sub[n - 1] = -2.0 * w;
    }
    sub[0] = 0.0;
    super[n - 1] = 0.0;
    sub_ = sub;
    inv_pivot_.resize(n);
    super_prime_.resize(n);
    double prev = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double pivot = diag[i] - sub[i] * prev;
      inv_pivot_[i] = 1.0 / pivot;
      prev = super[i] * inv_pivot_[i];
      super_prime_[i] = prev;
    }
  }
  rhs_.resize(n);
  scratch_.resize(n);
}

void Stepper::step(std::vector<double>& u) {
  const std::size_t n = domain_.n_points;
  if (u.size() != n) throw InvalidArgument("state size does not match the domain");
  for (double v : u) {
    if (!(v >= -1e-12 && v <= 1.0 + 1e-12)) {
      throw InvalidArgument("state outside [0, 1]: " + format_number(v, 6));
    }
  }
  const double dt = domain_.dt;
  const double h = domain_.spacing();
  const bool clamped = domain_.boundary == Boundary::clamped;
  std::vector<double>& next = scratch_;

  if (domain_.scheme == Scheme::imex) {
    for (std::size_t i = 0; i < n; ++i) rhs_[i] = u[i] + dt * reaction_->evaluate(x_[i], u[i]);
    if (clamped) {
      rhs_[0] = u[0];
      rhs_[n - 1] = u[n - 1];
    }
    next[0] = rhs_[0] * inv_pivot_[0];
    for (std::size_t i = 1; i < n; ++i) next[i] = (rhs_[i] - sub_[i] * next[i - 1]) * inv_pivot_[i];
    for (std::size_t i = n - 1; i-- > 0;) next[i] -= super_prime_[i] * next[i + 1];
  } else {
    const double w = dt / (h * h);
    const double adv = dt * q_ / (2.0 * h);
    for (std::size_t i = 0; i < n; ++i) {
      const double left = i == 0 ? u[1] : u[i - 1];
      const double right = i + 1 == n ? u[n - 2] : u[i + 1];
      next[i] = u[i] + w * (right - 2.0 * u[i] + left) + adv * (right - left) +
                dt * reaction_->evaluate(x_[i], u[i]);
    }
    if (clamped) {
      next[0] = u[0];
      next[n - 1] = u[n - 1];
    }
  }

  last_min_ = *std::min_element(next.begin(), next.end());
  last_max_ = *std::max_element(next.begin(), next.end());
  if (last_min_ < -0.1 || last_max_ > 1.1) {
    throw Instability("state left [-0.1, 1.1]: min " + format_number(last_min_, 6) + ", max " +
                      format_number(last_max_, 6));
  }
  for (std::size_t i = 0; i < n; ++i) u[i] = std::clamp(next[i], 0.0, 1.0);
}

std::vector<double> step(const std::vector<double>& u, const SimulationDomain& domain,
                         const CoefficientField& coeffs, const Reaction& reaction) {
  Stepper s(domain, coeffs, reaction);
  std::vector<double> out = u;
  s.step(out);
  return out;
}

FrontMeasurement measure_spreading_speed(const SimulationDomain& domain,
                                         const CoefficientField& coeffs, const Reaction& reaction,
                                         Side side, const FrontOptions& options) {
  Stepper stepper(domain, coeffs, reaction);
  const std::size_t n = domain.n_points;
  const double h = domain.spacing();
  const double period = coeffs.grid().period_length();
  const double margin = options.edge_margin_periods * period;

  FrontMeasurement m;
  m.side = side;
  m.level = options.level;

  // Half-line indicator, linear over two cells around x0.
  const double x0 = side == Side::left ? domain.x_max - options.start_offset_periods * period
                                       : domain.x_min + options.start_offset_periods * period;
  std::vector<double> u(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::clamp((domain.node(i) - x0) / (2.0 * h) + 0.5, 0.0, 1.0);
    u[i] = side == Side::left ? r : 1.0 - r;
  }

  auto snapshot = [&](double t) {
    for (std::size_t i = 0; i < n; ++i) m.snapshots.push_back({t, domain.node(i), u[i]});
  };
  if (options.snapshot_stride > 0) snapshot(0.0);

  const auto steps = static_cast<std::size_t>(std::llround(domain.t_end / domain.dt));
  m.trajectory.reserve(steps);
  for (std::size_t k = 1; k <= steps; ++k) {
    stepper.step(u);
    const double t = static_cast<double>(k) * domain.dt;
    const double x = level_position(u, domain, options.level, side);
    if (std::isnan(x)) throw FitRejected("level " + format_number(options.level, 6) + " not found");
    const double room = side == Side::left ? x - domain.x_min : domain.x_max - x;
    if (room < margin) {
      throw FrontHitBoundary("front within " + format_number(room, 6) + " of the " +
                             (side == Side::left ? std::string("left") : std::string("right")) +
                             " edge at t = " + format_number(t, 6));
    }
    m.trajectory.emplace_back(t, x);
    if (options.snapshot_stride > 0 && k % options.snapshot_stride == 0) snapshot(t);
  }

  const double t_fit = domain.t_end * (1.0 - options.fit_fraction);
  std::vector<double> ts, xs;
  for (const auto& [t, x] : m.trajectory) {
    if (t >= t_fit) {
      ts.push_back(t);
      xs.push_back(x);
    }
  }
  if (ts.size() < 3) throw FitRejected("fit window holds fewer than 3 samples");
  const LineFit fit = least_squares(ts, xs);
  m.fit_window = {ts.front(), ts.back()};
  m.r_squared = fit.r_squared;
  m.speed = side == Side::left ? -fit.slope : fit.slope;
  if (!(fit.r_squared >= options.min_r_squared)) {
    throw FitRejected("level-set fit r^2 = " + format_number(fit.r_squared, 6) + " below " +
                      format_number(options.min_r_squared, 6));
  }

  // Leading-edge exponent from log u ahead of the front.
  const double x_front = m.trajectory.back().second;
  std::vector<double> xe, lu;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = domain.node(i);
    const bool ahead = side == Side::left ? x < x_front : x > x_front;
    if (ahead && u[i] >= options.decay_band_lo && u[i] <= options.decay_band_hi) {
      xe.push_back(x);
      lu.push_back(std::log(u[i]));
    }
  }
  m.decay_points = xe.size();
  m.decay_rate = std::numeric_limits<double>::quiet_NaN();
  if (xe.size() >= 5) {
    const double slope = least_squares(xe, lu).slope;
    m.decay_rate = side == Side::left ? slope : -slope;
  }

  const auto directed = coeffs.with_direction(side == Side::left ? +1 : -1);
  const DispersionResult disp = linear_speed(directed);
  m.c0 = disp.c0;
  m.near_linear = m.speed <= disp.c0 * (1.0 + options.linear_band);
  m.mu1 = m.mu2 = disp.mu_bar;
  if (m.speed > disp.c0) {
    const DecayRates rates = decay_rates(directed, disp, m.speed);
    m.mu1 = rates.mu1;
    m.mu2 = rates.mu2;
  }
  m.classification = FrontClass::ambiguous;
  if (std::isfinite(m.decay_rate)) {
    const auto close = [&](double mu) {
      return std::abs(m.decay_rate - mu) <= options.class_tolerance * mu;
    };
    const double e1 = std::abs(m.decay_rate - m.mu1) / m.mu1;
    const double e2 = std::abs(m.decay_rate - m.mu2) / m.mu2;
    if (m.near_linear) {
      // mu1(c) and mu2(c) split like sqrt(c - c0) here; a rate near mu_bar is pulled,
      // one that instead matches mu2 of the measured speed is pushed.
      if (close(disp.mu_bar)) {
        m.classification = FrontClass::pulled;
      } else if (m.speed > disp.c0 && close(m.mu2)) {
        m.classification = FrontClass::pushed;
      }
    } else if (e1 <= e2 && close(m.mu1)) {
      m.classification = FrontClass::pulled;
    } else if (e2 < e1 && close(m.mu2)) {
      m.classification = FrontClass::pushed;
    }
  }
  return m;
}

KeyValueBlock to_key_values(const FrontMeasurement& m) {
  KeyValueBlock kv;
  kv.add("side", to_string(m.side));
  kv.add("speed", m.speed);
  kv.add("level", m.level);
  kv.add("fit_t_start", m.fit_window.first);
  kv.add("fit_t_end", m.fit_window.second);
  kv.add("r_squared", m.r_squared);
  kv.add("r_squared_min", 0.999);
  kv.add("decay_rate", m.decay_rate);
  kv.add("decay_points", static_cast<unsigned long>(m.decay_points));
  kv.add("c0", m.c0);
  kv.add("near_linear", m.near_linear);
  kv.add("mu1", m.mu1);
  kv.add("mu2", m.mu2);
  kv.add("classification", to_string(m.classification));
  kv.add("classification_tolerance", 0.10);
  return kv;
}

RecursionCandidate classify_recursion_candidate(const CoefficientField& coeffs,
                                                const Reaction& reaction, double c,
                                                const RecursionOptions& opt) {
  if (!(c > 0.0)) throw InvalidArgument("recursion speed must be positive");
  if (!(opt.omega > 0.0 && opt.omega < 1.0)) throw InvalidArgument("ramp height must lie in (0, 1)");
  const double period = coeffs.grid().period_length();
  const double h = period / opt.cells_per_period;

  // Time per iteration and shift.
  const bool homogeneous = reaction.is_homogeneous();
  const int m_periods = std::max(1, static_cast<int>(std::lround(c / period)));
  const double tau = homogeneous ? 1.0 : m_periods * period / c;
  const double shift = homogeneous ? c : m_periods * period;

  SimulationDomain d;
  d.x_min = -opt.left_periods * period;
  d.x_max = opt.right_periods * period;
  d.n_points = static_cast<std::size_t>(std::lround((d.x_max - d.x_min) / h)) + 1;
  const int substeps = std::max(1, static_cast<int>(std::ceil(tau / opt.dt_max)));
  d.dt = tau / substeps;
  d.t_end = tau;
  d.boundary = Boundary::outflow;
  // Rightward spreading is leftward spreading of the mirrored medium.
  Stepper stepper(d, coeffs, reaction, coeffs.direction_e());

  const std::size_t n = d.n_points;
  std::vector<double> phi(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = d.node(i);
    phi[i] = x <= 0.0 ? 0.0 : opt.omega * std::min(1.0, x / (opt.ramp_periods * period));
  }
  const std::size_t probe_end =
      std::min(n, static_cast<std::size_t>(std::lround(opt.probe_periods * period / h)) + 1);

  // The frame follows the candidate front: W(x) -> W(x - shift).
  const double cells = shift / h;
  const auto whole = static_cast<std::ptrdiff_t>(std::floor(cells));
  const double frac = cells - static_cast<double>(whole);

  RecursionCandidate out;
  out.c = c;
  std::vector<double> a = phi, w(n), next(n);
  if (opt.record_iterates) out.iterates.push_back(a);
  for (int it = 1; it <= opt.n_max; ++it) {
    w = a;
    for (int k = 0; k < substeps; ++k) stepper.step(w);
    double inc = 0.0;
    // Inflow from beyond the left edge: the edge value once the front has
    // arrived there, zero before. A constant extension of tiny values would
    // act as a spatially flat mode growing like exp(k(0) n) in any frame.
    const double inflow = w[0] >= opt.inflow_threshold ? w[0] : 0.0;
    auto at = [&](std::ptrdiff_t j) {
      return j < 0 ? inflow : w[static_cast<std::size_t>(std::min<std::ptrdiff_t>(j, n - 1))];
    };
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = static_cast<std::ptrdiff_t>(i) - whole;
      const double shifted = frac == 0.0 ? at(j) : (1.0 - frac) * at(j) + frac * at(j - 1);
      next[i] = std::max(phi[i], shifted);
      if (next[i] < a[i] - 1e-12) {
        throw std::logic_error("recursion iterate decreased at node " + std::to_string(i));
      }
      inc = std::max(inc, next[i] - a[i]);
    }
    a.swap(next);
    if (opt.record_iterates) out.iterates.push_back(a);
    out.iterations = it;
    out.front_position = level_position(a, d, 0.5 * (1.0 + opt.omega), Side::left);
    out.probe_min = *std::min_element(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(probe_end));
    if (out.probe_min >= opt.subcritical_level) {
      out.subcritical = true;
      return out;
    }
    if (inc < opt.stabilization_tol) {
      out.stabilized = true;
      return out;
    }
  }
  return out;
}

RecursionResult weinberger_recursion(const CoefficientField& coeffs, const Reaction& reaction,
                                     double c_lo, double c_hi, double tol,
                                     const RecursionOptions& options) {
  if (!(c_lo < c_hi)) throw InvalidArgument("recursion bracket must satisfy c_lo < c_hi");
  if (!(tol > 0.0)) throw InvalidArgument("recursion tolerance must be positive");
  RecursionResult r;
  const auto lo = classify_recursion_candidate(coeffs, reaction, c_lo, options);
  const auto hi = classify_recursion_candidate(coeffs, reaction, c_hi, options);
  r.candidates = {lo, hi};
  if (lo.subcritical == hi.subcritical) {
    throw BracketInvalid("both ends of [" + format_number(c_lo, 6) + ", " + format_number(c_hi, 6) +
                         "] are " + (lo.subcritical ? "sub" : "super") + "-critical");
  }
  if (!lo.subcritical) {
    throw BracketInvalid("bracket is reversed: c_lo is super-critical and c_hi sub-critical");
  }
  double a = c_lo, b = c_hi;
  while (b - a > tol) {
    const double mid = 0.5 * (a + b);
    const auto cand = classify_recursion_candidate(coeffs, reaction, mid, options);
    r.candidates.push_back(cand);
    (cand.subcritical ? a : b) = mid;
  }
  r.c_lo = a;
  r.c_hi = b;
  r.speed = 0.5 * (a + b);
  return r;
}

double weinberger_recursion_speed(const CoefficientField& coeffs, const Reaction& reaction,
                                  double c_lo, double c_hi, double tol,
                                  const RecursionOptions& options) {
  return weinberger_recursion(coeffs, reaction, c_lo, c_hi, tol, options).speed;
}

KeyValueBlock to_key_values(const RecursionResult& r) {
  KeyValueBlock kv;
  kv.add("speed", r.speed);
  kv.add("bracket_lo", r.c_lo);
  kv.add("bracket_hi", r.c_hi);
  kv.add("candidates", static_cast<unsigned long>(r.candidates.size()));
  for (std::size_t j = 0; j < r.candidates.size(); ++j) {
    const auto& c = r.candidates[j];
    const std::string p = "candidate." + std::to_string(j) + ".";
    kv.add(p + "c", c.c);
    kv.add(p + "subcritical", c.subcritical);
    kv.add(p + "iterations", c.iterations);
  }
  return kv;
}

}  // namespace frontspeed
