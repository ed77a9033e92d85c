#include "frontspeed/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "frontspeed/dispersion.hpp"
#include "frontspeed/eigen.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/report.hpp"
#include "frontspeed/selection.hpp"
#include "frontspeed/semiflow.hpp"

namespace frontspeed {

namespace {

std::ostream& out_of(const CommandContext& ctx) { return ctx.out ? *ctx.out : std::cout; }
std::ostream& err_of(const CommandContext& ctx) { return ctx.err ? *ctx.err : std::cerr; }

std::filesystem::path output_dir(const ProblemConfig& config, const CommandContext& ctx) {
  std::filesystem::path dir = ctx.out_dir ? *ctx.out_dir : std::filesystem::path(config.output.dir);
  std::filesystem::create_directories(dir);
  return dir;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

void emit_report(const KeyValueBlock& kv, const std::filesystem::path& path,
                 const CommandContext& ctx) {
  const std::string text = kv.to_string();
  write_text(path, text);
  out_of(ctx) << text;
  if (ctx.verbose) err_of(ctx) << "wrote " << path.string() << "\n";
}

const Reaction& require_reaction(const Problem& p, const char* command) {
  if (!p.reaction) {
    throw InvalidArgument(std::string(command) + " requires reaction = kpp_allee");
  }
  return *p.reaction;
}

// Maps library errors to exit codes; `failure_code` covers errors of the
// command's own stage (assumption or simulation).
template <class Body>
int guarded(const CommandContext& ctx, int failure_code, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err_of(ctx) << "config error: " << e.what() << "\n";
    return exit_code::config_error;
  } catch (const InvalidArgument& e) {
    err_of(ctx) << "invalid configuration: " << e.what() << "\n";
    return exit_code::config_error;
  } catch (const AssumptionViolated& e) {
    err_of(ctx) << "assumption violated: " << e.what() << "\n";
    return exit_code::assumption_violation;
  } catch (const FrontHitBoundary& e) {
    err_of(ctx) << "simulation failed: " << e.what() << "\n";
    return exit_code::simulation_failure;
  } catch (const FitRejected& e) {
    err_of(ctx) << "simulation failed: " << e.what() << "\n";
    return exit_code::simulation_failure;
  } catch (const Instability& e) {
    err_of(ctx) << "simulation failed: " << e.what() << "\n";
    return exit_code::simulation_failure;
  } catch (const Error& e) {
    err_of(ctx) << "error: " << e.what() << "\n";
    return failure_code;
  } catch (const std::logic_error& e) {
    err_of(ctx) << "internal consistency check failed: " << e.what() << "\n";
    return failure_code;
  }
}

std::pair<double, double> recursion_bracket(const ProblemConfig& config,
                                            const DispersionResult& disp) {
  double hi = disp.c0 + 1.5;
  if (config.reaction == ReactionKind::kpp_allee && config.a.min() > 2.0) {
    const double qe = config.advection_q * config.direction_e;
    hi = speed_bounds_kpp_allee(qe, config.a.min(), config.a.max()).second + 0.25;
  }
  return {config.recursion.c_lo.value_or(disp.c0 - 0.25), config.recursion.c_hi.value_or(hi)};
}

}  // namespace

int cmd_dispersion(const ProblemConfig& config, const CommandContext& ctx) {
  return guarded(ctx, exit_code::assumption_violation, [&] {
    const Problem p = build_problem(config);
    const DispersionResult disp = linear_speed(p.coeffs);
    const auto dir = output_dir(config, ctx);
    std::vector<std::vector<double>> rows;
    for (const auto& [lambda, k] : disp.k_samples) rows.push_back({lambda, k, k / lambda});
    write_csv(dir / "dispersion.csv", kDispersionCsvHeader, rows);
    KeyValueBlock kv;
    kv.add("command", "dispersion");
    kv.add("advection_q", config.advection_q);
    kv.merge(to_key_values(disp));
    emit_report(kv, dir / "dispersion_report.txt", ctx);
    return exit_code::ok;
  });
}

int cmd_select(const ProblemConfig& config, const CommandContext& ctx) {
  return guarded(ctx, exit_code::assumption_violation, [&] {
    const Problem p = build_problem(config);
    const Reaction& reaction = require_reaction(p, "select");
    const DispersionResult disp = linear_speed(p.coeffs);
    const SelectionReport report =
        select_mechanism(p.coeffs, reaction, disp, selection_options(config));
    const auto dir = output_dir(config, ctx);
    write_csv(dir / "criterion_linear.csv", kCriterionCsvHeader, criterion_rows(report.linear_grid));
    write_csv(dir / "criterion_nonlinear.csv", kCriterionCsvHeader,
              criterion_rows(report.nonlinear_grid));
    KeyValueBlock kv;
    kv.add("command", "select");
    kv.add("a", config.a.to_string());
    kv.add("advection_q", config.advection_q);
    kv.merge(to_key_values(report));
    emit_report(kv, dir / "select_report.txt", ctx);
    return exit_code::ok;
  });
}

int cmd_simulate(const ProblemConfig& config, const CommandContext& ctx) {
  return guarded(ctx, exit_code::simulation_failure, [&] {
    const Problem p = build_problem(config);
    const Reaction& reaction = require_reaction(p, "simulate");
    const SimulationDomain domain = simulation_domain(config);
    const FrontOptions options = front_options(config);
    const auto dir = output_dir(config, ctx);
    KeyValueBlock kv;
    kv.add("command", "simulate");
    kv.add("a", config.a.to_string());
    kv.add("advection_q", config.advection_q);
    kv.add("x_min", domain.x_min);
    kv.add("x_max", domain.x_max);
    kv.add("n_points", static_cast<unsigned long>(domain.n_points));
    kv.add("dt", domain.dt);
    kv.add("t_end", domain.t_end);
    kv.add("boundary", to_string(domain.boundary));
    kv.add("scheme", to_string(domain.scheme));
    std::vector<Side> sides;
    if (config.simulation.sides != SideSelection::right) sides.push_back(Side::left);
    if (config.simulation.sides != SideSelection::left) sides.push_back(Side::right);
    for (Side side : sides) {
      if (ctx.verbose) err_of(ctx) << "simulating " << to_string(side) << " front\n";
      const FrontMeasurement m = measure_spreading_speed(domain, p.coeffs, reaction, side, options);
      const std::string name = to_string(side);
      kv.merge(to_key_values(m), name + ".");
      std::vector<std::vector<double>> traj;
      for (const auto& [t, x] : m.trajectory) traj.push_back({t, x});
      write_csv(dir / ("front_" + name + ".csv"), {"t", "x"}, traj);
      if (options.snapshot_stride > 0) {
        write_csv(dir / ("snapshots_" + name + ".csv"), kSnapshotCsvHeader, m.snapshots);
      }
    }
    emit_report(kv, dir / "simulate_report.txt", ctx);
    return exit_code::ok;
  });
}

int cmd_cstar_recursion(const ProblemConfig& config, const CommandContext& ctx) {
  return guarded(ctx, exit_code::simulation_failure, [&] {
    const Problem p = build_problem(config);
    const Reaction& reaction = require_reaction(p, "cstar-recursion");
    const DispersionResult disp = linear_speed(p.coeffs);
    const auto [lo, hi] = recursion_bracket(config, disp);
    if (ctx.verbose) {
      err_of(ctx) << "recursion bracket [" << format_number(lo, 6) << ", " << format_number(hi, 6)
                  << "]\n";
    }
    const RecursionResult r = weinberger_recursion(p.coeffs, reaction, lo, hi, config.recursion.tol,
                                                   recursion_options(config));
    const auto dir = output_dir(config, ctx);
    KeyValueBlock kv;
    kv.add("command", "cstar-recursion");
    kv.add("a", config.a.to_string());
    kv.add("advection_q", config.advection_q);
    kv.add("c0", disp.c0);
    kv.add("omega", config.recursion.omega);
    kv.add("tol", config.recursion.tol);
    kv.merge(to_key_values(r));
    emit_report(kv, dir / "recursion_report.txt", ctx);
    return exit_code::ok;
  });
}

namespace {

void check(ReproductionRow& row, std::string name, double value, double expected,
           double tolerance, bool relative = false) {
  const double scale = relative ? std::abs(expected) : 1.0;
  const bool ok = std::isfinite(value) && std::abs(value - expected) <= tolerance * scale;
  row.checks.push_back({row.a_spec + ", q=" + format_number(row.q), std::move(name), value,
                        expected, tolerance, ok});
}

void check_true(ReproductionRow& row, std::string name, bool ok) {
  row.checks.push_back({row.a_spec + ", q=" + format_number(row.q), std::move(name),
                        ok ? 1.0 : 0.0, 1.0, 0.0, ok});
}

// Closed-form speed for u(1-u)(1+au), eta = 1: q + 2 if a <= 2, else the explicit
// pushed front speed q + sqrt(a/2) + sqrt(2/a).
double expected_speed(double a, double q) {
  return a <= 2.0 ? q + 2.0 : q + std::sqrt(a / 2.0) + std::sqrt(2.0 / a);
}

struct Cell {
  Waveform a;
  double q = 0.0;
  bool recursion = false;
};

ReproductionRow run_cell(const Cell& cell, const ReproductionOptions& options) {
  ReproductionRow row;
  row.a_spec = cell.a.is_constant() ? "a=" + format_number(cell.a.offset)
                                    : "a=" + cell.a.to_string();
  row.q = cell.q;
  try {
    ProblemConfig config;
    config.a = cell.a;
    config.advection_q = cell.q;
    config.simulation = options.simulation;
    const Problem p = build_problem(config);
    const Reaction& reaction = *p.reaction;
    const double q = cell.q;

    const DispersionResult disp = linear_speed(p.coeffs);
    row.c0 = disp.c0;
    const bool constant = cell.a.is_constant();
    if (constant) {
      check(row, "c0 = q + 2", disp.c0, q + 2.0, 1e-6);
      double worst = 0.0;
      for (double lambda : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        const double exact = lambda * lambda + q * lambda + 1.0;
        worst = std::max(worst, std::abs(k_of_lambda(p.coeffs, lambda).eigenvalue - exact) / exact);
      }
      check(row, "k(lambda) = lambda^2 + q lambda + 1 (max rel. error)", worst, 0.0, 1e-8);
      const DecayRates rates = decay_rates(p.coeffs, disp, q + 2.5);
      check(row, "mu1(q + 2.5) = 0.5", rates.mu1, 0.5, 1e-8);
      check(row, "mu2(q + 2.5) = 2", rates.mu2, 2.0, 1e-8);
    }

    const SelectionReport sel = select_mechanism(p.coeffs, reaction, disp,
                                                 selection_options(config));
    row.verdict = to_string(sel.verdict);
    row.lower_bound = sel.lower_bound_c;
    row.upper_bound = sel.upper_bound_c;
    row.allee_bounds = sel.allee_bounds;
    const double a_min = cell.a.min();
    const double a_max = cell.a.max();
    if (a_max <= 2.0) {
      check_true(row, "verdict linear", sel.verdict == Verdict::linear);
      if (a_max == 2.0) {
        check(row, "linear criterion max at a = 2", sel.criterion_max_linear, 0.0, 1e-8);
      }
    } else if (a_min > 2.0) {
      check_true(row, "verdict nonlinear", sel.verdict == Verdict::nonlinear);
      check_true(row, "linear criterion fails (max > 0)", sel.criterion_max_linear > 0.0);
      check_true(row, "certified lower bound > c0",
                 sel.lower_bound_c.has_value() && *sel.lower_bound_c > disp.c0);
      const double m_bound = q + std::sqrt(a_min / 2.0) + std::sqrt(2.0 / a_min);
      const double big_m_bound = q + std::sqrt(a_max / 2.0) + std::sqrt(2.0 / a_max);
      check_true(row, "closed-form bounds reported", sel.allee_bounds.has_value());
      if (sel.allee_bounds) {
        check(row, "lower closed-form bound", sel.allee_bounds->first, m_bound, 1e-12);
        check(row, "upper closed-form bound", sel.allee_bounds->second, big_m_bound, 1e-12);
      }
      if (constant && cell.a.offset == 8.0 && sel.lower_bound_c) {
        check_true(row, "lower bound >= q + 2.25", *sel.lower_bound_c >= q + 2.25);
      }
    }

    const SimulationDomain domain = simulation_domain(config);
    const FrontMeasurement m =
        measure_spreading_speed(domain, p.coeffs, reaction, Side::left, front_options(config));
    row.c_sim = m.speed;
    row.decay_rate = m.decay_rate;
    row.decay_class = to_string(m.classification);
    if (constant) {
      check(row, "simulated speed (2%)", m.speed, expected_speed(a_min, q), 0.02, true);
      if (a_min < 2.0) check_true(row, "decay class pulled", m.classification == FrontClass::pulled);
      if (a_min > 2.0) check_true(row, "decay class pushed", m.classification == FrontClass::pushed);
    } else {
      const double lo = q + std::sqrt(a_min / 2.0) + std::sqrt(2.0 / a_min);
      const double hi = q + std::sqrt(a_max / 2.0) + std::sqrt(2.0 / a_max);
      check_true(row, "simulated speed inside closed-form bounds (+-1%)",
                 m.speed > lo * 0.99 && m.speed < hi * 1.01);
    }

    if (cell.recursion) {
      const double lo = disp.c0 - 0.25;
      const double hi = (sel.allee_bounds ? sel.allee_bounds->second : disp.c0 + 1.5) + 0.25;
      const double c_rec = weinberger_recursion_speed(p.coeffs, reaction, lo, hi, 0.01);
      row.c_recursion = c_rec;
      check(row, "recursion vs simulation (5%)", c_rec, m.speed, 0.05, true);
    }
  } catch (const std::exception& e) {
    row.error = e.what();
    row.checks.push_back({row.a_spec + ", q=" + format_number(row.q), "row computed", 0.0, 1.0,
                          0.0, false});
  }
  return row;
}

std::string opt(const std::optional<double>& v) { return v ? format_number(*v, 8) : "-"; }

std::string summary_csv(const std::vector<ReproductionRow>& rows) {
  std::ostringstream out;
  out << "a,q,c0,verdict,lower_bound,upper_bound,bound_m,bound_M,c_sim,decay_rate,decay_class,"
         "c_recursion,passed\n";
  for (const auto& r : rows) {
    const bool ok = std::all_of(r.checks.begin(), r.checks.end(), [](auto& c) { return c.passed; });
    out << r.a_spec.substr(2) << "," << format_number(r.q, 8) << "," << format_number(r.c0, 10)
        << "," << (r.verdict.empty() ? "-" : r.verdict) << "," << opt(r.lower_bound) << ","
        << opt(r.upper_bound) << ","
        << (r.allee_bounds ? format_number(r.allee_bounds->first, 8) : "-") << ","
        << (r.allee_bounds ? format_number(r.allee_bounds->second, 8) : "-") << ","
        << format_number(r.c_sim, 6) << "," << format_number(r.decay_rate, 6) << ","
        << (r.decay_class.empty() ? "-" : r.decay_class) << "," << opt(r.c_recursion) << ","
        << (ok ? "true" : "false") << "\n";
  }
  return out.str();
}

}  // namespace

std::vector<ReproductionRow> reproduce_paper(const ReproductionOptions& options, unsigned threads) {
  std::vector<Cell> cells;
  for (double a : options.a_values) {
    for (double q : options.q_values) {
      cells.push_back({Waveform::constant(a), q, options.recursion && a == 8.0});
    }
  }
  if (options.heterogeneous_row) cells.push_back({Waveform::sin2(5.0, 2.0), 0.0, options.recursion});

  std::vector<ReproductionRow> rows(cells.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) rows[i] = run_cell(cells[i], options);
  };
  const unsigned n = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(cells.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

int cmd_reproduce_paper(const CommandContext& ctx, const ReproductionOptions& options) {
  const auto rows = reproduce_paper(options, ctx.threads);
  ProblemConfig defaults;
  const auto dir = output_dir(defaults, ctx);
  const std::string csv = summary_csv(rows);
  write_text(dir / "reproduce_summary.csv", csv);

  std::ostringstream report;
  std::vector<const ReproductionCheck*> failed;
  for (const auto& r : rows) {
    if (!r.error.empty()) report << "ERROR " << r.a_spec << ", q=" << format_number(r.q) << ": " << r.error << "\n";
    for (const auto& c : r.checks) {
      report << (c.passed ? "PASS " : "FAIL ") << c.row << ": " << c.name
             << " value=" << format_number(c.value, 10) << " expected=" << format_number(c.expected, 10)
             << " tol=" << format_number(c.tolerance, 3) << "\n";
      if (!c.passed) failed.push_back(&c);
    }
  }
  write_text(dir / "reproduce_report.txt", report.str());
  out_of(ctx) << csv;
  if (ctx.verbose) out_of(ctx) << report.str();
  if (!failed.empty()) {
    err_of(ctx) << failed.size() << " reproduction check(s) failed:\n";
    for (const auto* c : failed) {
      err_of(ctx) << "  " << c->row << ": " << c->name << " value=" << format_number(c->value, 10)
                  << " expected=" << format_number(c->expected, 10) << "\n";
    }
    return exit_code::reproduction_failure;
  }
  return exit_code::ok;
}

int run_subcommand(const std::string& name, const std::optional<std::filesystem::path>& config_path,
                   const CommandContext& ctx) {
  if (name == "reproduce-paper") return cmd_reproduce_paper(ctx);
  ProblemConfig config;
  try {
    if (config_path) config = load_config(*config_path);
  } catch (const ConfigError& e) {
    err_of(ctx) << "config error: " << (config_path ? config_path->string() + ": " : "") << e.what()
                << "\n";
    return exit_code::config_error;
  }
  if (name == "dispersion") return cmd_dispersion(config, ctx);
  if (name == "select") return cmd_select(config, ctx);
  if (name == "simulate") return cmd_simulate(config, ctx);
  if (name == "cstar-recursion") return cmd_cstar_recursion(config, ctx);
  err_of(ctx) << "unknown subcommand '" << name << "'\n";
  return exit_code::config_error;
}

}  // namespace frontspeed
