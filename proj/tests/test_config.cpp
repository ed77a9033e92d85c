#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <string>

#include "frontspeed/config.hpp"
#include "frontspeed/errors.hpp"

using namespace frontspeed;

namespace {

// Position of the ConfigError raised by `text`.
std::pair<std::size_t, std::size_t> error_at(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return {e.line(), e.column()};
  }
  FAIL("no ConfigError for: " << text);
  return {0, 0};
}

}  // namespace

TEST_CASE("empty text gives the defaults") {
  const ProblemConfig c = parse_config("");
  CHECK(c == ProblemConfig{});
  CHECK(c.n_cells == 256);
  CHECK(c.simulation.n_points == 8192);
  CHECK(c.simulation.t_end == 80.0);
  CHECK(c.selection.shrink == 0.01);
}

TEST_CASE("full config parses") {
  const ProblemConfig c = parse_config(R"(
# heterogeneous Allee problem
[problem]
period_length = 2
n_cells = 128
direction_e = -1
advection_q = 0.5   # constant advection
a = sin2 5 2

[simulation]
domain_periods = 100
n_points = 2001
dt = 0.005
t_end = 40
boundary = outflow
scheme = explicit
sides = left
level = 0.4
fit_fraction = 0.5
decay_band_lo = 1e-9
decay_band_hi = 1e-4
snapshot_stride = 10

[selection]
epsilon_ladder = 0.01, 0.1, 0.3
epsilon_max = 0.4
shrink = 0.02
refine = false
refine_steps = 12
search_upper_bound = false

[recursion]
c_lo = 1.5
c_hi = 3
tol = 0.005
omega = 0.25
cells_per_period = 32
n_max = 100
left_periods = 20
right_periods = 5

[output]
dir = results/run 1
)");
  CHECK(c.period_length == 2.0);
  CHECK(c.n_cells == 128);
  CHECK(c.direction_e == -1);
  CHECK(c.advection_q == 0.5);
  CHECK(c.a == Waveform::sin2(5, 2));
  CHECK(c.simulation.domain_periods == 100.0);
  CHECK(c.simulation.boundary == Boundary::outflow);
  CHECK(c.simulation.scheme == Scheme::explicit_euler);
  CHECK(c.simulation.sides == SideSelection::left);
  CHECK(c.simulation.snapshot_stride == 10);
  CHECK(c.selection.epsilon_ladder == std::vector<double>{0.01, 0.1, 0.3});
  CHECK_FALSE(c.selection.refine);
  CHECK(c.recursion.c_lo == 1.5);
  CHECK(c.recursion.c_hi == 3.0);
  CHECK(c.recursion.cells_per_period == 32);
  CHECK(c.output.dir == "results/run 1");

  SUBCASE("round trip") {
    const std::string text = serialize_config(c);
    CHECK(parse_config(text) == c);
    CHECK(serialize_config(parse_config(text)) == text);
  }
}

TEST_CASE("round trip of defaults, linear reaction and shifted sine") {
  for (const char* text : {"", "[problem]\nreaction = linear\neta = shifted_sine 1 0.5 0.3\n",
                           "[problem]\nreaction = linear\neta = -0.5\nzeta = constant 0.25\n",
                           "[problem]\na = 0.1\nadvection_q = -1.25\n"}) {
    const ProblemConfig c = parse_config(text);
    CHECK(parse_config(serialize_config(c)) == c);
  }
  ProblemConfig c;
  c.advection_q = 0.1 + 0.2;
  c.a = Waveform::sin2(1.0 / 3.0, std::sqrt(2.0));
  CHECK(parse_config(serialize_config(c)) == c);
}

TEST_CASE("waveform forms") {
  CHECK(parse_config("[problem]\na = 8\n").a == Waveform::constant(8));
  CHECK(parse_config("[problem]\na = constant 8\n").a == Waveform::constant(8));
  CHECK(parse_config("[problem]\na = shifted_sine 3 1 0.5\n").a ==
        Waveform::shifted_sine(3, 1, 0.5));
}

TEST_CASE("diagnostics carry line and column") {
  CHECK(error_at("[problem]\nadvection_q = abc\n") == std::pair<std::size_t, std::size_t>{2, 15});
  CHECK(error_at("[nope]\n") == std::pair<std::size_t, std::size_t>{1, 2});
  CHECK(error_at("[problem]\n  colour = 3\n") == std::pair<std::size_t, std::size_t>{2, 3});
  CHECK(error_at("n_cells = 3\n") == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(error_at("[problem]\nn_cells 64\n") == std::pair<std::size_t, std::size_t>{2, 1});
  CHECK(error_at("[problem]\nn_cells = 64\nn_cells = 32\n") ==
        std::pair<std::size_t, std::size_t>{3, 1});
  CHECK(error_at("[problem]\nn_cells = 4\n") == std::pair<std::size_t, std::size_t>{2, 11});
  CHECK(error_at("[problem]\nn_cells = 6.5\n") == std::pair<std::size_t, std::size_t>{2, 11});
  CHECK(error_at("[problem]\na = sin2 5\n") == std::pair<std::size_t, std::size_t>{2, 5});
  CHECK(error_at("[problem]\na = sin2 5 x\n") == std::pair<std::size_t, std::size_t>{2, 12});
  CHECK(error_at("[problem]\na = cosine 1\n") == std::pair<std::size_t, std::size_t>{2, 5});
  CHECK(error_at("[problem]\nadvection_q =\n") == std::pair<std::size_t, std::size_t>{2, 14});
  CHECK(error_at("[problem\n") == std::pair<std::size_t, std::size_t>{1, 1});
  CHECK(error_at("[selection]\nepsilon_ladder = 0.1, 0.05\n") ==
        std::pair<std::size_t, std::size_t>{2, 23});
  CHECK(error_at("[simulation]\nscheme = rk4\n") == std::pair<std::size_t, std::size_t>{2, 10});
  CHECK(error_at("[recursion]\nc_lo = 3\nc_hi = 2\n") == std::pair<std::size_t, std::size_t>{3, 1});
}

TEST_CASE("a must be positive everywhere") {
  CHECK(error_at("[problem]\na = 0\n") == std::pair<std::size_t, std::size_t>{2, 5});
  CHECK(error_at("[problem]\na = sin2 1 -1\n").first == 2);
  CHECK(error_at("[problem]\na = shifted_sine 1 2 0\n").first == 2);
  CHECK_NOTHROW(parse_config("[problem]\na = shifted_sine 1 0.5 0\n"));
}

TEST_CASE("reaction consistency") {
  CHECK(error_at("[problem]\neta = 1\n").first == 2);
  CHECK(error_at("[problem]\nreaction = linear\n").first == 2);
  CHECK(error_at("[problem]\nreaction = linear\neta = 1\na = 2\n").first == 4);
  CHECK(error_at("[simulation]\ndecay_band_lo = 0.01\n").first == 2);
  CHECK(error_at("[simulation]\nlevel = 1e-4\n").first == 2);
  CHECK(error_at("[selection]\nepsilon_max = 0.3\n").first == 2);
}

TEST_CASE("load_config") {
  const auto path = std::filesystem::temp_directory_path() / "frontspeed_test_config.ini";
  {
    std::ofstream out(path);
    out << "[problem]\na = 8\n";
  }
  CHECK(load_config(path).a == Waveform::constant(8));
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_config(path), ConfigError);
}

TEST_CASE("problem construction") {
  SUBCASE("kpp_allee") {
    const ProblemConfig c = parse_config("[problem]\nadvection_q = 1\na = sin2 5 2\nn_cells = 64\n");
    const Problem p = build_problem(c);
    REQUIRE(p.reaction.has_value());
    CHECK(p.coeffs.advection() == 1.0);
    for (std::size_t i = 0; i < p.coeffs.size(); ++i) {
      const double x = p.grid.node(i);
      const double a = 5 + 2 * std::pow(std::sin(2 * M_PI * x), 2);
      CHECK(p.coeffs.eta()[i] == doctest::Approx(1.0).epsilon(1e-12));
      CHECK(p.coeffs.zeta()[i] == doctest::Approx(-(1 + a)).epsilon(1e-12));
    }
    const auto opts = selection_options(c);
    REQUIRE(opts.allee_range.has_value());
    CHECK(opts.allee_range->first == 5.0);
    CHECK(opts.allee_range->second == 7.0);
  }
  SUBCASE("linear") {
    const Problem p = build_problem(parse_config("[problem]\nreaction = linear\neta = sin2 1 -2\n"));
    CHECK_FALSE(p.reaction.has_value());
    CHECK(p.coeffs.eta()[0] == 1.0);
    CHECK(p.coeffs.zeta()[0] == -1.0);
  }
  SUBCASE("domain") {
    const ProblemConfig c =
        parse_config("[problem]\nperiod_length = 2\n[simulation]\ndomain_periods = 50\n");
    const SimulationDomain d = simulation_domain(c);
    CHECK(d.x_min == 0.0);
    CHECK(d.x_max == 100.0);
    CHECK_NOTHROW(d.validate(2.0));
  }
}

#ifdef FRONTSPEED_CONFIG_DIR
TEST_CASE("shipped configs parse and round-trip") {
  std::size_t n = 0;
  for (const auto& entry : std::filesystem::directory_iterator(FRONTSPEED_CONFIG_DIR)) {
    if (entry.path().extension() != ".ini") continue;
    const ProblemConfig c = load_config(entry.path());
    CHECK(parse_config(serialize_config(c)) == c);
    ++n;
  }
  CHECK(n >= 3);
}
#endif
