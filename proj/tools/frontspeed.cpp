// Command-line front end: dispersion, select, simulate, cstar-recursion, reproduce-paper.
#include <CLI11.hpp>

#include <filesystem>
#include <optional>
#include <string>
#include <thread>

#include "frontspeed/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Front speeds of periodic reaction-advection-diffusion equations"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  bool verbose = false;
  app.add_option("--config", config_path, "Problem config file")->check(CLI::ExistingFile);
  app.add_option("--out-dir", out_dir, "Output directory (overrides [output] dir)");
  app.add_option("--threads", threads, "Worker threads for reproduce-paper")
      ->check(CLI::PositiveNumber);
  app.add_flag("--verbose", verbose, "Progress and file diagnostics on stderr");

  for (const char* name : {"dispersion", "select", "simulate", "cstar-recursion"}) {
    app.add_subcommand(name)->fallthrough();
  }
  app.add_subcommand("reproduce-paper", "Run the constant and heterogeneous Allee test matrix")
      ->fallthrough();
  app.get_subcommand("dispersion")->description("k(lambda) sweep, c0, mu_bar, k(0), kbar(0)");
  app.get_subcommand("select")->description("Linear or nonlinear selection verdict and speed bounds");
  app.get_subcommand("simulate")->description("Simulated spreading speeds and decay classes");
  app.get_subcommand("cstar-recursion")->description("Spreading speed from the monotone recursion");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : frontspeed::exit_code::config_error;
  }

  frontspeed::CommandContext ctx;
  if (!out_dir.empty()) ctx.out_dir = std::filesystem::path(out_dir);
  ctx.threads = threads;
  ctx.verbose = verbose;
  std::optional<std::filesystem::path> config;
  if (!config_path.empty()) config = std::filesystem::path(config_path);
  return frontspeed::run_subcommand(app.get_subcommands().front()->get_name(), config, ctx);
}
