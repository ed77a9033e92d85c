#pragma once

#include <cmath>
#include <utility>

namespace frontspeed {

struct GoldenResult {
  double argmin;
  double value;
  int evaluations;
};

// Golden-section minimization of a unimodal f on [a, b]; returns the best
// point evaluated once the bracket is narrower than `tol`.
template <typename F>
GoldenResult golden_section_minimize(F&& f, double a, double b, double tol, int max_iter = 500) {
  constexpr double inv_phi = 0.6180339887498948482;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  int evals = 2;
  GoldenResult best = fc < fd ? GoldenResult{c, fc, 0} : GoldenResult{d, fd, 0};
  for (int i = 0; i < max_iter && (b - a) > tol; ++i) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc, 0};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd, 0};
    }
    ++evals;
  }
  best.evaluations = evals;
  return best;
}

// Bisection for a sign change of g on [lo, hi]; g(lo) and g(hi) must differ in sign.
template <typename G>
double bisect_root(G&& g, double lo, double hi, double tol, int max_iter = 200) {
  double glo = g(lo);
  for (int i = 0; i < max_iter && (hi - lo) > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0.0) == (glo > 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace frontspeed
