#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frontspeed/coefficients.hpp"
#include "frontspeed/grid.hpp"
#include "frontspeed/reaction.hpp"
#include "frontspeed/selection.hpp"
#include "frontspeed/semiflow.hpp"
#include "frontspeed/waveform.hpp"

namespace frontspeed {

/// Problem description read from a config file.
///
/// Grammar (one item per line, `#` starts a comment):
///   [section]
///   key = value
/// Waveform values: `<number>`, `constant <v>`, `sin2 <offset> <amp>`,
/// `shifted_sine <offset> <amp> <phase>`. Lists are comma separated.
/// Unknown sections or keys, duplicates and bad values are ConfigError
/// with the 1-based line and column of the offending token.
enum class ReactionKind { kpp_allee, linear };
const char* to_string(ReactionKind k);

enum class SideSelection { both, left, right };
const char* to_string(SideSelection s);

struct SimulationConfig {
  double domain_periods = 400.0;
  std::size_t n_points = 8192;
  double dt = 0.01;
  double t_end = 80.0;
  Boundary boundary = Boundary::clamped;
  Scheme scheme = Scheme::imex;
  SideSelection sides = SideSelection::both;
  double level = 0.5;
  double fit_fraction = 0.4;
  double decay_band_lo = 1e-8;
  double decay_band_hi = 1e-3;
  std::size_t snapshot_stride = 0;

  bool operator==(const SimulationConfig&) const = default;
};

struct SelectionConfig {
  std::vector<double> epsilon_ladder = kEpsilonLadder;
  double epsilon_max = 0.5;
  double shrink = 0.01;
  bool refine = true;
  int refine_steps = 30;
  bool search_upper_bound = true;

  bool operator==(const SelectionConfig&) const = default;
};

struct RecursionConfig {
  // Bracket on c; unset ends are derived from c0 and the closed-form bounds.
  std::optional<double> c_lo;
  std::optional<double> c_hi;
  double tol = 0.01;
  double omega = 0.5;
  int cells_per_period = 16;
  int n_max = 4000;
  double left_periods = 30.0;
  double right_periods = 10.0;

  bool operator==(const RecursionConfig&) const = default;
};

struct OutputConfig {
  std::string dir = ".";

  bool operator==(const OutputConfig&) const = default;
};

struct ProblemConfig {
  double period_length = 1.0;
  std::size_t n_cells = 256;
  int direction_e = 1;
  double advection_q = 0.0;
  ReactionKind reaction = ReactionKind::kpp_allee;
  Waveform a = Waveform::constant(1.0);
  // Only with reaction = linear; zeta defaults to -eta there.
  std::optional<Waveform> eta;
  std::optional<Waveform> zeta;
  SimulationConfig simulation;
  SelectionConfig selection;
  RecursionConfig recursion;
  OutputConfig output;

  bool operator==(const ProblemConfig&) const = default;
};

ProblemConfig parse_config(std::string_view text);
// Unreadable files are ConfigError at line 0.
ProblemConfig load_config(const std::filesystem::path& path);
// Every field, in parse order; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ProblemConfig& config);

struct Problem {
  PeriodicGrid grid;
  std::optional<Reaction> reaction;  // absent for reaction = linear
  CoefficientField coeffs;
};

Problem build_problem(const ProblemConfig& config);
SimulationDomain simulation_domain(const ProblemConfig& config);
FrontOptions front_options(const ProblemConfig& config);
SelectionOptions selection_options(const ProblemConfig& config);
RecursionOptions recursion_options(const ProblemConfig& config);

}  // namespace frontspeed
