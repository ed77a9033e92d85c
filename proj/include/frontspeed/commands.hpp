#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "frontspeed/config.hpp"

namespace frontspeed {

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int config_error = 1;
inline constexpr int assumption_violation = 2;
inline constexpr int simulation_failure = 3;
inline constexpr int reproduction_failure = 4;
}  // namespace exit_code

struct CommandContext {
  std::optional<std::filesystem::path> out_dir;  // overrides [output] dir
  unsigned threads = 1;
  bool verbose = false;
  std::ostream* out = nullptr;  // report echo; std::cout when null
  std::ostream* err = nullptr;  // diagnostics; std::cerr when null
};

// Each writes its files under the output directory and returns an exit code;
// library errors are mapped to codes, never rethrown.
int cmd_dispersion(const ProblemConfig& config, const CommandContext& ctx);
int cmd_select(const ProblemConfig& config, const CommandContext& ctx);
int cmd_simulate(const ProblemConfig& config, const CommandContext& ctx);
int cmd_cstar_recursion(const ProblemConfig& config, const CommandContext& ctx);

struct ReproductionOptions {
  std::vector<double> a_values = {1.0, 1.5, 2.0, 3.0, 8.0};
  std::vector<double> q_values = {0.0, 1.0};
  SimulationConfig simulation;  // domain used for every simulated row
  bool heterogeneous_row = true;  // a = 5 + 2 sin^2, q = 0
  bool recursion = true;          // recursion speed on the a = 8 and heterogeneous rows
};

struct ReproductionCheck {
  std::string row;
  std::string name;
  double value = 0.0;
  double expected = 0.0;
  double tolerance = 0.0;
  bool passed = false;
};

struct ReproductionRow {
  std::string a_spec;
  double q = 0.0;
  double c0 = 0.0;
  std::string verdict;
  std::optional<double> lower_bound;
  std::optional<double> upper_bound;
  std::optional<std::pair<double, double>> allee_bounds;
  double c_sim = 0.0;
  double decay_rate = 0.0;
  std::string decay_class;
  std::optional<double> c_recursion;
  std::string error;  // non-empty if the row could not be computed
  std::vector<ReproductionCheck> checks;
};

std::vector<ReproductionRow> reproduce_paper(const ReproductionOptions& options, unsigned threads);
int cmd_reproduce_paper(const CommandContext& ctx, const ReproductionOptions& options = {});

// Loads the config (exit 1 on ConfigError) and dispatches by subcommand name.
int run_subcommand(const std::string& name, const std::optional<std::filesystem::path>& config,
                   const CommandContext& ctx);

}  // namespace frontspeed
