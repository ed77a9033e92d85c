#include "frontspeed/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <utility>

#include "frontspeed/errors.hpp"
#include "frontspeed/report.hpp"

namespace frontspeed {

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

[[noreturn]] void fail(const Token& t, const std::string& what) {
  throw ConfigError(what, t.line, t.column);
}

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Trimmed slice of `s` starting at 0-based `start`, with its 1-based column.
Token trimmed(const std::string& s, std::size_t start, std::size_t end, std::size_t line) {
  while (start < end && is_space(s[start])) ++start;
  while (end > start && is_space(s[end - 1])) --end;
  return {s.substr(start, end - start), line, start + 1};
}

std::vector<Token> split(const Token& t, char sep) {
  std::vector<Token> out;
  std::size_t i = 0;
  const std::string& s = t.text;
  while (i <= s.size()) {
    std::size_t j = i;
    if (sep == ' ') {
      while (i < s.size() && is_space(s[i])) ++i;
      if (i == s.size()) break;
      j = i;
      while (j < s.size() && !is_space(s[j])) ++j;
    } else {
      j = s.find(sep, i);
      if (j == std::string::npos) j = s.size();
    }
    Token part = trimmed(s, i, j, t.line);
    part.column += t.column - 1;
    out.push_back(part);
    i = j + 1;
  }
  return out;
}

double to_double(const Token& t) {
  double v = 0.0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.text.empty() || ec != std::errc() || ptr != last || !std::isfinite(v)) {
    fail(t, "expected a number, got '" + t.text + "'");
  }
  return v;
}

long to_integer(const Token& t) {
  long v = 0;
  const char* first = t.text.data();
  const char* last = first + t.text.size();
  const auto [ptr, ec] = std::from_chars(first, last, v);
  if (t.text.empty() || ec != std::errc() || ptr != last) {
    fail(t, "expected an integer, got '" + t.text + "'");
  }
  return v;
}

bool to_bool(const Token& t) {
  if (t.text == "true") return true;
  if (t.text == "false") return false;
  fail(t, "expected true or false, got '" + t.text + "'");
}

template <class Enum>
Enum to_enum(const Token& t, std::initializer_list<std::pair<const char*, Enum>> names) {
  std::string allowed;
  for (const auto& [name, value] : names) {
    if (t.text == name) return value;
    allowed += allowed.empty() ? name : std::string(", ") + name;
  }
  fail(t, "unknown value '" + t.text + "' (expected " + allowed + ")");
}

Waveform to_waveform(const Token& t) {
  const auto parts = split(t, ' ');
  if (parts.empty()) fail(t, "empty waveform");
  const auto arity = [&](std::size_t n) {
    if (parts.size() != n + 1) {
      fail(parts.front(), "waveform '" + parts.front().text + "' takes " + std::to_string(n) +
                              " parameter(s)");
    }
  };
  const std::string& kind = parts.front().text;
  if (kind == "constant") {
    arity(1);
    return Waveform::constant(to_double(parts[1]));
  }
  if (kind == "sin2") {
    arity(2);
    return Waveform::sin2(to_double(parts[1]), to_double(parts[2]));
  }
  if (kind == "shifted_sine") {
    arity(3);
    return Waveform::shifted_sine(to_double(parts[1]), to_double(parts[2]), to_double(parts[3]));
  }
  if (parts.size() == 1) return Waveform::constant(to_double(parts[0]));
  fail(parts.front(), "unknown waveform '" + kind + "' (expected constant, sin2, shifted_sine)");
}

void require(bool ok, const Token& t, const std::string& what) {
  if (!ok) fail(t, what);
}

double positive(const Token& t) {
  const double v = to_double(t);
  require(v > 0.0, t, "must be > 0");
  return v;
}

using Setter = std::function<void(ProblemConfig&, const Token&)>;
using SectionTable = std::map<std::string, Setter>;

const std::map<std::string, SectionTable>& grammar() {
  static const std::map<std::string, SectionTable> table = {
      {"problem",
       {
           {"period_length", [](ProblemConfig& c, const Token& t) { c.period_length = positive(t); }},
           {"n_cells",
            [](ProblemConfig& c, const Token& t) {
              const long n = to_integer(t);
              require(n >= static_cast<long>(kMinCells), t,
                      "must be >= " + std::to_string(kMinCells));
              c.n_cells = static_cast<std::size_t>(n);
            }},
           {"direction_e",
            [](ProblemConfig& c, const Token& t) {
              const long e = to_integer(t);
              require(e == 1 || e == -1, t, "must be 1 or -1");
              c.direction_e = static_cast<int>(e);
            }},
           {"advection_q", [](ProblemConfig& c, const Token& t) { c.advection_q = to_double(t); }},
           {"reaction",
            [](ProblemConfig& c, const Token& t) {
              c.reaction = to_enum<ReactionKind>(
                  t, {{"kpp_allee", ReactionKind::kpp_allee}, {"linear", ReactionKind::linear}});
            }},
           {"a",
            [](ProblemConfig& c, const Token& t) {
              c.a = to_waveform(t);
              require(c.a.min() > 0.0, t, "a must be > 0 everywhere (min " +
                                              format_number(c.a.min()) + ")");
            }},
           {"eta", [](ProblemConfig& c, const Token& t) { c.eta = to_waveform(t); }},
           {"zeta", [](ProblemConfig& c, const Token& t) { c.zeta = to_waveform(t); }},
       }},
      {"simulation",
       {
           {"domain_periods",
            [](ProblemConfig& c, const Token& t) {
              const long n = to_integer(t);
              require(n >= 1, t, "must be a positive whole number of periods");
              c.simulation.domain_periods = static_cast<double>(n);
            }},
           {"n_points",
            [](ProblemConfig& c, const Token& t) {
              const long n = to_integer(t);
              require(n >= 3, t, "must be >= 3");
              c.simulation.n_points = static_cast<std::size_t>(n);
            }},
           {"dt", [](ProblemConfig& c, const Token& t) { c.simulation.dt = positive(t); }},
           {"t_end", [](ProblemConfig& c, const Token& t) { c.simulation.t_end = positive(t); }},
           {"boundary",
            [](ProblemConfig& c, const Token& t) {
              c.simulation.boundary = to_enum<Boundary>(
                  t, {{"clamped", Boundary::clamped}, {"outflow", Boundary::outflow}});
            }},
           {"scheme",
            [](ProblemConfig& c, const Token& t) {
              c.simulation.scheme = to_enum<Scheme>(
                  t, {{"imex", Scheme::imex}, {"explicit", Scheme::explicit_euler}});
            }},
           {"sides",
            [](ProblemConfig& c, const Token& t) {
              c.simulation.sides = to_enum<SideSelection>(t, {{"both", SideSelection::both},
                                                              {"left", SideSelection::left},
                                                              {"right", SideSelection::right}});
            }},
           {"level",
            [](ProblemConfig& c, const Token& t) {
              const double v = to_double(t);
              require(v > 0.0 && v < 1.0, t, "must lie in (0, 1)");
              c.simulation.level = v;
            }},
           {"fit_fraction",
            [](ProblemConfig& c, const Token& t) {
              const double v = to_double(t);
              require(v > 0.0 && v <= 1.0, t, "must lie in (0, 1]");
              c.simulation.fit_fraction = v;
            }},
           {"decay_band_lo",
            [](ProblemConfig& c, const Token& t) { c.simulation.decay_band_lo = positive(t); }},
           {"decay_band_hi",
            [](ProblemConfig& c, const Token& t) { c.simulation.decay_band_hi = positive(t); }},
           {"snapshot_stride",
            [](ProblemConfig& c, const Token& t) {
              const long n = to_integer(t);
              require(n >= 0, t, "must be >= 0");
              c.simulation.snapshot_stride = static_cast<std::size_t>(n);
            }},
       }},
      {"selection",
       {
           {"epsilon_ladder",
            [](ProblemConfig& c, const Token& t) {
              std::vector<double> ladder;
              for (const Token& p : split(t, ',')) {
                const double v = positive(p);
                require(ladder.empty() || v > ladder.back(), p, "ladder must be increasing");
                ladder.push_back(v);
              }
              c.selection.epsilon_ladder = ladder;
            }},
           {"epsilon_max",
            [](ProblemConfig& c, const Token& t) { c.selection.epsilon_max = positive(t); }},
           {"shrink",
            [](ProblemConfig& c, const Token& t) {
              const double v = to_double(t);
              require(v > 0.0 && v < 1.0, t, "must lie in (0, 1)");
              c.selection.shrink = v;
            }},
           {"refine", [](ProblemConfig& c, const Token& t) { c.selection.refine = to_bool(t); }},
           {"refine_steps",
            [](ProblemConfig& c, const Token& t) {
              const long n = to_integer(t);
              require(n >= 0 && n <= 200, t, "must lie in [0, 200]");
              c.selection.refine_steps = static_cast<int>(n);
            }},
           {"search_upper_bound",
            [](ProblemConfig& c, const Token& t) { c.selection.search_upper_bound = to_bool(t); }},
       }},
      {"recursion",
       {
           {"c_lo", [](ProblemConfig& c, const Token& t) { c.recursion.c_lo = to_double(t); }},
           {"c_hi", [](ProblemConfig& c, const Token& t) { c.recursion.c_hi = to_double(t); }},
           {"tol", [](ProblemConfig& c, const Token& t) { c.recursion.tol = positive(t); }},
           {"omega",
            [](ProblemConfig& c, const Token& t) {
              const double v = to_double(t);
              require(v > 0.0 && v < 1.0, t, "must lie in (0, 1)");
              c.recursion.omega = v;
            }},
           {"cells_per_period",
            [](ProblemConfig& c, const Token& t) {
              const long n = to_integer(t);
              require(n >= 4, t, "must be >= 4");
              c.recursion.cells_per_period = static_cast<int>(n);
            }},
           {"n_max",
            [](ProblemConfig& c, const Token& t) {
              const long n = to_integer(t);
              require(n >= 1, t, "must be >= 1");
              c.recursion.n_max = static_cast<int>(n);
            }},
           {"left_periods",
            [](ProblemConfig& c, const Token& t) { c.recursion.left_periods = positive(t); }},
           {"right_periods",
            [](ProblemConfig& c, const Token& t) { c.recursion.right_periods = positive(t); }},
       }},
      {"output",
       {
           {"dir",
            [](ProblemConfig& c, const Token& t) {
              require(!t.text.empty(), t, "empty path");
              c.output.dir = t.text;
            }},
       }},
  };
  return table;
}

}  // namespace

const char* to_string(ReactionKind k) { return k == ReactionKind::kpp_allee ? "kpp_allee" : "linear"; }

const char* to_string(SideSelection s) {
  switch (s) {
    case SideSelection::both:
      return "both";
    case SideSelection::left:
      return "left";
    case SideSelection::right:
      return "right";
  }
  return "both";
}

ProblemConfig parse_config(std::string_view text) {
  ProblemConfig config;
  const auto& table = grammar();
  const SectionTable* section = nullptr;
  std::string section_name;
  std::map<std::string, Token> seen;  // "section.key" -> key token

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    const std::size_t end = hash == std::string::npos ? raw.size() : hash;
    const Token line = trimmed(raw, 0, end, line_no);
    if (line.text.empty()) continue;

    if (line.text.front() == '[') {
      if (line.text.back() != ']') fail(line, "unterminated section header");
      Token name = trimmed(raw, line.column, line.column + line.text.size() - 2, line_no);
      const auto it = table.find(name.text);
      if (it == table.end()) fail(name, "unknown section '" + name.text + "'");
      section = &it->second;
      section_name = name.text;
      continue;
    }

    const std::size_t eq = raw.find('=', line.column - 1);
    if (eq == std::string::npos || eq >= end) fail(line, "expected 'key = value'");
    const Token key = trimmed(raw, line.column - 1, eq, line_no);
    const Token value = trimmed(raw, eq + 1, end, line_no);
    if (key.text.empty()) fail(line, "missing key before '='");
    if (section == nullptr) fail(key, "key '" + key.text + "' outside of a section");
    const auto setter = section->find(key.text);
    if (setter == section->end()) {
      fail(key, "unknown key '" + key.text + "' in section [" + section_name + "]");
    }
    const std::string full = section_name + "." + key.text;
    if (const auto prev = seen.find(full); prev != seen.end()) {
      fail(key, "duplicate key '" + key.text + "' (first on line " +
                    std::to_string(prev->second.line) + ")");
    }
    if (value.text.empty()) fail(Token{"", line_no, eq + 2}, "missing value for '" + key.text + "'");
    seen.emplace(full, key);
    setter->second(config, value);
  }

  const auto at = [&](const std::string& k) { return seen.at(k); };
  const auto has = [&](const std::string& k) { return seen.count(k) != 0; };
  if (config.reaction == ReactionKind::kpp_allee) {
    if (has("problem.eta")) fail(at("problem.eta"), "eta is derived from the reaction; use reaction = linear");
    if (has("problem.zeta")) fail(at("problem.zeta"), "zeta is derived from the reaction; use reaction = linear");
  } else {
    if (has("problem.a")) fail(at("problem.a"), "a is only used by reaction = kpp_allee");
    if (!has("problem.eta")) {
      fail(has("problem.reaction") ? at("problem.reaction") : Token{"", line_no, 1},
           "reaction = linear requires eta");
    }
  }
  if (config.simulation.decay_band_lo >= config.simulation.decay_band_hi) {
    fail(has("simulation.decay_band_hi") ? at("simulation.decay_band_hi")
                                         : at("simulation.decay_band_lo"),
         "decay band must satisfy lo < hi");
  }
  if (config.simulation.decay_band_hi >= config.simulation.level) {
    fail(has("simulation.decay_band_hi") ? at("simulation.decay_band_hi") : at("simulation.level"),
         "decay band must lie below the front level");
  }
  if (config.selection.epsilon_ladder.back() > config.selection.epsilon_max) {
    fail(has("selection.epsilon_ladder") ? at("selection.epsilon_ladder")
                                         : at("selection.epsilon_max"),
         "ladder exceeds epsilon_max");
  }
  if (config.recursion.c_lo && config.recursion.c_hi &&
      *config.recursion.c_lo >= *config.recursion.c_hi) {
    fail(at("recursion.c_hi"), "recursion bracket must satisfy c_lo < c_hi");
  }
  return config;
}

ProblemConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string(), 0, 0);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string serialize_config(const ProblemConfig& c) {
  std::ostringstream out;
  const auto num = [](double v) { return format_number(v); };
  out << "[problem]\n"
      << "period_length = " << num(c.period_length) << "\n"
      << "n_cells = " << c.n_cells << "\n"
      << "direction_e = " << c.direction_e << "\n"
      << "advection_q = " << num(c.advection_q) << "\n"
      << "reaction = " << to_string(c.reaction) << "\n";
  if (c.reaction == ReactionKind::kpp_allee) out << "a = " << c.a.to_string() << "\n";
  if (c.eta) out << "eta = " << c.eta->to_string() << "\n";
  if (c.zeta) out << "zeta = " << c.zeta->to_string() << "\n";

  const auto& s = c.simulation;
  out << "\n[simulation]\n"
      << "domain_periods = " << static_cast<long>(s.domain_periods) << "\n"
      << "n_points = " << s.n_points << "\n"
      << "dt = " << num(s.dt) << "\n"
      << "t_end = " << num(s.t_end) << "\n"
      << "boundary = " << to_string(s.boundary) << "\n"
      << "scheme = " << to_string(s.scheme) << "\n"
      << "sides = " << to_string(s.sides) << "\n"
      << "level = " << num(s.level) << "\n"
      << "fit_fraction = " << num(s.fit_fraction) << "\n"
      << "decay_band_lo = " << num(s.decay_band_lo) << "\n"
      << "decay_band_hi = " << num(s.decay_band_hi) << "\n"
      << "snapshot_stride = " << s.snapshot_stride << "\n";

  const auto& sel = c.selection;
  out << "\n[selection]\nepsilon_ladder = ";
  for (std::size_t i = 0; i < sel.epsilon_ladder.size(); ++i) {
    out << (i ? ", " : "") << num(sel.epsilon_ladder[i]);
  }
  out << "\n"
      << "epsilon_max = " << num(sel.epsilon_max) << "\n"
      << "shrink = " << num(sel.shrink) << "\n"
      << "refine = " << (sel.refine ? "true" : "false") << "\n"
      << "refine_steps = " << sel.refine_steps << "\n"
      << "search_upper_bound = " << (sel.search_upper_bound ? "true" : "false") << "\n";

  const auto& r = c.recursion;
  out << "\n[recursion]\n";
  if (r.c_lo) out << "c_lo = " << num(*r.c_lo) << "\n";
  if (r.c_hi) out << "c_hi = " << num(*r.c_hi) << "\n";
  out << "tol = " << num(r.tol) << "\n"
      << "omega = " << num(r.omega) << "\n"
      << "cells_per_period = " << r.cells_per_period << "\n"
      << "n_max = " << r.n_max << "\n"
      << "left_periods = " << num(r.left_periods) << "\n"
      << "right_periods = " << num(r.right_periods) << "\n";

  out << "\n[output]\ndir = " << c.output.dir << "\n";
  return out.str();
}

Problem build_problem(const ProblemConfig& c) {
  const PeriodicGrid grid = make_grid(c.period_length, c.n_cells);
  const double period = c.period_length;
  if (c.reaction == ReactionKind::kpp_allee) {
    const Waveform a = c.a;
    Reaction reaction = a.is_constant()
                            ? Reaction::kpp_allee(grid, a.offset)
                            : Reaction::kpp_allee(grid, [a, period](double x) { return a(x, period); });
    CoefficientField coeffs =
        CoefficientField::from_reaction(grid, c.advection_q, reaction, c.direction_e);
    return {grid, std::move(reaction), std::move(coeffs)};
  }
  const Waveform eta = *c.eta;
  const Waveform zeta = c.zeta ? *c.zeta : Waveform{eta.kind, -eta.offset, -eta.amplitude, eta.phase};
  CoefficientField coeffs = CoefficientField::sampled(
      grid, c.advection_q, [eta, period](double x) { return eta(x, period); },
      [zeta, period](double x) { return zeta(x, period); }, c.direction_e);
  return {grid, std::nullopt, std::move(coeffs)};
}

SimulationDomain simulation_domain(const ProblemConfig& c) {
  const auto& s = c.simulation;
  SimulationDomain d = SimulationDomain::periods(c.period_length, s.domain_periods, s.n_points,
                                                 s.dt, s.t_end, s.boundary);
  d.scheme = s.scheme;
  return d;
}

FrontOptions front_options(const ProblemConfig& c) {
  FrontOptions o;
  o.level = c.simulation.level;
  o.fit_fraction = c.simulation.fit_fraction;
  o.decay_band_lo = c.simulation.decay_band_lo;
  o.decay_band_hi = c.simulation.decay_band_hi;
  o.snapshot_stride = c.simulation.snapshot_stride;
  return o;
}

SelectionOptions selection_options(const ProblemConfig& c) {
  SelectionOptions o;
  o.epsilon_ladder = c.selection.epsilon_ladder;
  o.epsilon_max = c.selection.epsilon_max;
  o.shrink = c.selection.shrink;
  o.refine = c.selection.refine;
  o.refine_steps = c.selection.refine_steps;
  o.search_upper_bound = c.selection.search_upper_bound;
  if (c.reaction == ReactionKind::kpp_allee) o.allee_range = std::pair{c.a.min(), c.a.max()};
  return o;
}

RecursionOptions recursion_options(const ProblemConfig& c) {
  RecursionOptions o;
  o.omega = c.recursion.omega;
  o.cells_per_period = c.recursion.cells_per_period;
  o.n_max = c.recursion.n_max;
  o.left_periods = c.recursion.left_periods;
  o.right_periods = c.recursion.right_periods;
  return o;
}

}  // namespace frontspeed
