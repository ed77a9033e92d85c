#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "frontspeed/coefficients.hpp"
#include "frontspeed/dispersion.hpp"
#include "frontspeed/eigen.hpp"
#include "frontspeed/errors.hpp"
#include "frontspeed/reaction.hpp"

using namespace frontspeed;
using std::numbers::pi;

namespace {

// Closed-form roots of lambda^2 + (q - c) lambda + eta = 0.
std::pair<double, double> constant_roots(double q, double eta, double c) {
  const double b = c - q;
  const double disc = std::sqrt(b * b - 4 * eta);
  return {(b - disc) / 2, (b + disc) / 2};
}

CoefficientField sin2_eta(std::size_t n, double offset, double amp) {
  const auto g = make_grid(1.0, n);
  return CoefficientField::sampled(
      g, 0.0, [=](double x) { return offset + amp * std::pow(std::sin(2 * pi * x), 2); },
      [](double) { return -1.0; });
}

}  // namespace

TEST_CASE("linear speed for constant coefficients") {
  const auto g = make_grid(1.0, 256);
  for (double q : {0.0, 0.7, 1.0}) {
    const auto r = linear_speed(CoefficientField::constant(g, q, 1.0, -2.0));
    CHECK(r.c0 == doctest::Approx(q + 2.0).epsilon(1e-9));
    CHECK(std::abs(r.mu_bar - 1.0) <= 1e-10);
    CHECK(r.k0 == doctest::Approx(1.0));
    CHECK(r.convexity_ok);
    CHECK(std::abs(r.c0 - k_of_lambda(CoefficientField::constant(g, q, 1.0, -2.0), r.mu_bar).eigenvalue /
                              r.mu_bar) <= 1e-9 * r.c0);
  }
  // c0 - q e = 2 sqrt(eta)
  for (double eta : {0.25, 2.0, 3.0}) {
    const auto r = linear_speed(CoefficientField::constant(g, 0.4, eta, -2.0, -1));
    CHECK(r.c0 - 0.4 * -1 == doctest::Approx(2 * std::sqrt(eta)).epsilon(1e-9));
  }
}

TEST_CASE("linear speed with heterogeneous eta is sandwiched by its extremes") {
  const auto r = linear_speed(sin2_eta(256, 1.0, 1.0));
  CHECK(r.c0 >= 2.0);
  CHECK(r.c0 <= 2.0 * std::sqrt(2.0));
  CHECK(r.convexity_ok);
}

TEST_CASE("golden section is stable to bracket perturbation") {
  const auto coeffs = sin2_eta(128, 1.0, 0.8);
  const auto base = linear_speed(coeffs);
  DispersionOptions wide;
  wide.bracket = std::make_pair(base.mu_bar / 4.0, base.mu_bar * 4.0);
  const auto widened = linear_speed(coeffs, wide);
  wide.bracket = std::make_pair(base.mu_bar / 8.0, base.mu_bar * 8.0);
  const auto wider = linear_speed(coeffs, wide);
  CHECK(std::abs(base.c0 - widened.c0) < 1e-9);
  CHECK(std::abs(widened.c0 - wider.c0) < 1e-9);
}

TEST_CASE("assumption gate on k(0)") {
  const auto g = make_grid(1.0, 64);
  CHECK_THROWS_AS(linear_speed(CoefficientField::constant(g, 0.0, -0.5, -1.0)), AssumptionViolated);
  CHECK_THROWS_AS(linear_speed(CoefficientField::constant(g, 0.0, 0.0, -1.0)), AssumptionViolated);
  const auto marginal = linear_speed(CoefficientField::constant(g, 0.0, 1e-7, -1.0));
  CHECK(marginal.k0_marginal);
}

TEST_CASE("decay rates against the quadratic roots") {
  const auto g = make_grid(1.0, 256);
  SUBCASE("q = 0, c = 2.5") {
    const auto d = decay_rates(CoefficientField::constant(g, 0.0, 1.0, -2.0), 2.5);
    CHECK(std::abs(d.mu1 - 0.5) <= 1e-9);
    CHECK(std::abs(d.mu2 - 2.0) <= 1e-9);
  }
  SUBCASE("q = 1, c = 3.5 depends on c - q only") {
    const auto d = decay_rates(CoefficientField::constant(g, 1.0, 1.0, -2.0), 3.5);
    CHECK(std::abs(d.mu1 - 0.5) <= 1e-9);
    CHECK(std::abs(d.mu2 - 2.0) <= 1e-9);
  }
  SUBCASE("c = c0 rejected") {
    const auto coeffs = CoefficientField::constant(g, 0.0, 1.0, -2.0);
    const auto disp = linear_speed(coeffs);
    CHECK_THROWS_AS(decay_rates(coeffs, disp, disp.c0), SpeedBelowLinear);
    CHECK_THROWS_AS(decay_rates(coeffs, disp, 1.0), SpeedBelowLinear);
  }
  SUBCASE("random speeds") {
    for (double c : {2.25, 2.5, 3.0, 4.7}) {
      const auto coeffs = CoefficientField::constant(g, 0.3, 0.9, -2.0);
      const auto d = decay_rates(coeffs, c);
      const auto [m1, m2] = constant_roots(0.3, 0.9, c);
      CHECK(std::abs(d.mu1 - m1) <= 1e-9);
      CHECK(std::abs(d.mu2 - m2) <= 1e-9);
    }
  }
}

TEST_CASE("decay roots satisfy the dispersion relation and are monotone in c") {
  const auto coeffs = sin2_eta(128, 1.0, 1.0);
  const auto disp = linear_speed(coeffs);
  double prev_mu1 = disp.mu_bar, prev_mu2 = disp.mu_bar;
  for (double dc : {0.05, 0.2, 0.5, 1.0, 2.0}) {
    const double c = disp.c0 + dc;
    const auto d = decay_rates(coeffs, disp, c);
    CHECK(0.0 < d.mu1);
    CHECK(d.mu1 < disp.mu_bar);
    CHECK(disp.mu_bar < d.mu2);
    for (double mu : {d.mu1, d.mu2}) {
      const double k = k_of_lambda(coeffs, mu).eigenvalue;
      CHECK(std::abs(c * mu - k) <= 1e-9 * std::max(1.0, c * mu));
    }
    CHECK(d.mu1 < prev_mu1);
    CHECK(d.mu2 > prev_mu2);
    prev_mu1 = d.mu1;
    prev_mu2 = d.mu2;
  }
}

TEST_CASE("roots collapse onto mu_bar as c approaches c0") {
  const auto coeffs = sin2_eta(128, 1.0, 0.5);
  const auto disp = linear_speed(coeffs);
  double prev_gap = 1e300;
  for (double eps : {1e-1, 1e-2, 1e-3, 1e-4}) {
    const auto d = decay_rates(coeffs, disp, disp.c0 + eps);
    const double gap = d.mu2 - d.mu1;
    CHECK(gap < prev_gap);
    CHECK(std::abs(0.5 * (d.mu1 + d.mu2) - disp.mu_bar) <= 2.0 * gap);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.05);
}

TEST_CASE("stability check") {
  const auto g = make_grid(1.0, 64);
  CHECK(stability_check(CoefficientField::constant(g, 0.0, 1.0, -2.0)) == doctest::Approx(-2.0));
  const auto r = Reaction::kpp_allee(g, 8.0);
  const double kbar = stability_check(CoefficientField::from_reaction(g, 0.0, r));
  CHECK(kbar == doctest::Approx(-9.0).epsilon(1e-12));
  CHECK(classify_stability(kbar) == Stability::exponentially_stable);
  const double zero = stability_check(CoefficientField::constant(g, 0.0, 1.0, 0.0));
  CHECK(zero == 0.0);
  CHECK(classify_stability(zero) == Stability::degenerate);
  CHECK(classify_stability(0.3) == Stability::unstable);
  CHECK(classify_stability(-1e-3) == Stability::exponentially_stable);
}

TEST_CASE("convexity diagnostic") {
  const auto g = make_grid(1.0, 128);
  const auto constant = CoefficientField::constant(g, 0.0, 1.0, -2.0);
  const std::vector<double> grid5 = {0.5, 1.0, 1.5, 2.0, 2.5};
  CHECK(convexity_diagnostic(constant, grid5));
  CHECK(convexity_diagnostic(CoefficientField::constant(g, -0.6, 0.3, 0.0, -1), grid5));
  std::vector<double> grid16;
  for (int i = 1; i <= 16; ++i) grid16.push_back(0.25 * i);
  CHECK(convexity_diagnostic(sin2_eta(128, 1.0, 2.0), grid16));
  CHECK_THROWS_AS(convexity_diagnostic(constant, std::vector<double>{1.0, 2.0, 3.0}), InvalidArgument);
  const std::vector<std::pair<double, double>> concave = {{1, 1}, {2, 3}, {3, 4}, {4, 4.5}, {5, 4.7}};
  CHECK_FALSE(convexity_diagnostic(concave));
}

TEST_CASE("dispersion sweep rows") {
  const auto g = make_grid(1.0, 64);
  const std::vector<double> lambdas = {0.5, 1.0, 2.0};
  const auto rows = dispersion_sweep(CoefficientField::constant(g, 0.0, 1.0, -2.0), lambdas);
  REQUIRE(rows.size() == 3);
  CHECK(rows[1][1] == doctest::Approx(2.0));
  CHECK(rows[2][2] == doctest::Approx(2.5));
  const auto text = csv_text(kDispersionCsvHeader, rows);
  CHECK(text.rfind("lambda,k,k_over_lambda\n0.5,1.25,2.5\n", 0) == 0);
}

TEST_CASE("dk/dlambda from left and right Perron vectors") {
  const auto g = make_grid(1.0, 128);
  for (int e : {1, -1}) {
    const auto c = CoefficientField::constant(g, 0.6, 1.0, -2.0, e);
    for (double lambda : {0.3, 1.0, 2.5}) {
      CHECK(dk_dlambda(c, lambda) == doctest::Approx(2 * lambda + 0.6 * e).epsilon(1e-10));
    }
  }
  // Heterogeneous: against a central difference of k.
  const auto c = sin2_eta(128, 1.0, 1.5);
  for (double lambda : {0.5, 1.3}) {
    const double step = 1e-4;
    const double fd =
        (k_of_lambda(c, lambda + step).eigenvalue - k_of_lambda(c, lambda - step).eigenvalue) /
        (2 * step);
    CHECK(dk_dlambda(c, lambda) == doctest::Approx(fd).epsilon(1e-7));
  }
}

TEST_CASE("mu_bar satisfies the stationarity condition") {
  const auto c = sin2_eta(128, 1.0, 1.5);
  const auto r = linear_speed(c);
  CHECK(std::abs(r.mu_bar * dk_dlambda(c, r.mu_bar) - k_of_lambda(c, r.mu_bar).eigenvalue) <= 1e-10);
  CHECK(dk_dlambda(c, r.mu_bar) == doctest::Approx(r.c0).epsilon(1e-10));
}
