#include "frontspeed/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <string>
#include <tuple>

#include "frontspeed/errors.hpp"

namespace frontspeed {
namespace {

using Real = long double;

struct Bounds {
  Real lower;
  Real upper;
};

// Collatz-Wielandt bounds min/max (A v)_i / v_i for positive v; they bracket
// the Perron value.
Bounds collatz_wielandt(std::span<const Real> v, std::span<const Real> av) {
  Bounds b{std::numeric_limits<Real>::infinity(), -std::numeric_limits<Real>::infinity()};
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Real r = av[i] / v[i];
    b.lower = std::min(b.lower, r);
    b.upper = std::max(b.upper, r);
  }
  return b;
}

// Divides by the entry of largest magnitude, keeping its sign, so a vector
// of one sign comes back positive with max = 1.
void normalize_signed(std::span<Real> v) {
  Real big = 0;
  for (Real x : v) {
    if (std::abs(x) > std::abs(big)) big = x;
  }
  if (big == 0) throw NoConvergence("eigenvector iterate vanished");
  for (Real& x : v) x /= big;
}

bool all_positive(std::span<const Real> v) {
  return std::all_of(v.begin(), v.end(), [](Real x) { return x > 0; });
}

Real residual_of(std::span<const Real> v, std::span<const Real> av, Real k) {
  Real res = 0, vmax = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    res = std::max(res, std::abs(av[i] - k * v[i]));
    vmax = std::max(vmax, std::abs(v[i]));
  }
  return res / vmax;
}

// Solves (s I - A) x = b for the periodic tridiagonal A: Thomas on the
// band part, then a rank-2 Woodbury correction for the two corner entries.
class ShiftedCyclicSolver {
 public:
  ShiftedCyclicSolver(const OperatorMatrix& a, Real shift) : n_(a.size()) {
    sub_.resize(n_);
    sup_.resize(n_);
    pivot_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      sub_[i] = -Real(a.lower[i]);
      sup_[i] = -Real(a.upper[i]);
    }
    // Forward elimination of the band part (corners dropped).
    pivot_[0] = shift - Real(a.diag[0]);
    for (std::size_t i = 1; i < n_; ++i) {
      pivot_[i] = shift - Real(a.diag[i]) - sub_[i] * sup_[i - 1] / pivot_[i - 1];
    }
    corner_top_ = sub_[0];            // (0, n-1)
    corner_bottom_ = sup_[n_ - 1];    // (n-1, 0)

    std::vector<Real> e0(n_, 0), en(n_, 0);
    e0[0] = 1;
    en[n_ - 1] = 1;
    z1_ = band_solve(e0);
    z2_ = band_solve(en);
    // capacitance = I + V^T Z
    c11_ = 1 + corner_top_ * z1_[n_ - 1];
    c12_ = corner_top_ * z2_[n_ - 1];
    c21_ = corner_bottom_ * z1_[0];
    c22_ = 1 + corner_bottom_ * z2_[0];
  }

  std::vector<Real> solve(std::span<const Real> b) const {
    std::vector<Real> y = band_solve(b);
    const Real r1 = corner_top_ * y[n_ - 1];
    const Real r2 = corner_bottom_ * y[0];
    const Real det = c11_ * c22_ - c12_ * c21_;
    const Real w1 = (c22_ * r1 - c12_ * r2) / det;
    const Real w2 = (c11_ * r2 - c21_ * r1) / det;
    for (std::size_t i = 0; i < n_; ++i) y[i] -= z1_[i] * w1 + z2_[i] * w2;
    return y;
  }

 private:
  std::vector<Real> band_solve(std::span<const Real> b) const {
    std::vector<Real> y(n_);
    y[0] = b[0];
    for (std::size_t i = 1; i < n_; ++i) y[i] = b[i] - sub_[i] / pivot_[i - 1] * y[i - 1];
    y[n_ - 1] /= pivot_[n_ - 1];
    for (std::size_t i = n_ - 1; i-- > 0;) y[i] = (y[i] - sup_[i] * y[i + 1]) / pivot_[i];
    return y;
  }

  std::size_t n_;
  std::vector<Real> sub_, sup_, pivot_;
  Real corner_top_ = 0, corner_bottom_ = 0;
  std::vector<Real> z1_, z2_;
  Real c11_ = 0, c12_ = 0, c21_ = 0, c22_ = 0;
};

void apply_real(const OperatorMatrix& a, std::span<const Real> v, std::span<Real> av) {
  a.apply<Real>(v, av);
}

}  // namespace

double residual_tolerance(const OperatorMatrix& a, const EigenOptions& options) {
  double norm = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    norm = std::max(norm, std::abs(a.lower[i]) + std::abs(a.diag[i]) + std::abs(a.upper[i]));
  }
  return std::max(options.residual_tol, 2.0 * std::numeric_limits<double>::epsilon() * norm);
}

Eigenpair principal_eigenpair(const OperatorMatrix& a, const EigenOptions& options,
                              std::span<const double> initial) {
  if (!a.perron_structure) {
    throw MeshTooCoarse("negative off-diagonal entries at lambda = " + std::to_string(a.lambda) +
                        ": need spacing <= 2 / max|2 lambda e + q|");
  }
  const std::size_t n = a.size();
  std::vector<Real> v(n, 1), av(n);
  if (!initial.empty()) {
    if (initial.size() != n) throw InvalidArgument("initial vector size mismatch");
    std::copy(initial.begin(), initial.end(), v.begin());
    normalize_signed(v);
  }

  double sigma_diag = 0.0, sigma_off = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sigma_diag = std::max(sigma_diag, std::abs(a.diag[i]));
    sigma_off = std::max(sigma_off, a.lower[i] + a.upper[i]);
  }
  const Real sigma = Real(sigma_diag + sigma_off + 1.0);
  const Real inc_tol = options.eigenvalue_increment_tol;
  const Real res_tol = residual_tolerance(a, options);

  Eigenpair out;
  out.lambda = a.lambda;
  Real k_prev = std::numeric_limits<Real>::quiet_NaN();
  int it = 0;

  auto finish = [&](Real k, Real res) {
    out.eigenvalue = static_cast<double>(k);
    out.eigenfunction.resize(n);
    Real vmax = *std::max_element(v.begin(), v.end());
    for (std::size_t i = 0; i < n; ++i) out.eigenfunction[i] = static_cast<double>(v[i] / vmax);
    out.iterations = it;
    // Residual reported for the double-precision result.
    std::vector<double> check = a.apply(std::span<const double>(out.eigenfunction));
    double r = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      r = std::max(r, std::abs(check[i] - out.eigenvalue * out.eigenfunction[i]));
    }
    out.residual_norm = std::max(r, static_cast<double>(res));
    return out;
  };

  // Stage 1: power iteration on A + sigma I.
  const int power_budget = options.polish ? std::min(options.power_iterations, options.max_iterations)
                                          : options.max_iterations;
  for (; it < power_budget; ++it) {
    apply_real(a, v, av);
    if (all_positive(v)) {
      const Bounds b = collatz_wielandt(v, av);
      const Real k = (b.lower + b.upper) / 2;
      const Real res = residual_of(v, av, k);
      if (!options.polish && std::abs(k - k_prev) <= inc_tol && res <= res_tol) {
        return finish(k, res);
      }
      k_prev = k;
    }
    for (std::size_t i = 0; i < n; ++i) av[i] += sigma * v[i];
    v.swap(av);
    normalize_signed(v);
  }
  if (!options.polish) {
    throw NoConvergence("power iteration did not converge in " +
                        std::to_string(options.max_iterations) + " iterations");
  }
  if (!all_positive(v)) {
    // An indefinite start that power iteration has not yet purified.
    for (Real& x : v) x = std::max(std::abs(x), Real(1e-3));
  }

  // Stage 2: Collatz-Wielandt shifted inverse iteration; k_prev carries over
  // so an exact eigenvector from stage 1 is accepted without a solve.
  for (; it < options.max_iterations; ++it) {
    apply_real(a, v, av);
    const Bounds b = collatz_wielandt(v, av);
    const Real k = (b.lower + b.upper) / 2;
    const Real res = residual_of(v, av, k);
    if (std::abs(k - k_prev) <= inc_tol && res <= res_tol) return finish(k, res);
    k_prev = k;

    const Real margin = Real(1e-8) * std::max(Real(1), std::abs(b.upper));
    ShiftedCyclicSolver solver(a, b.upper + margin);
    std::vector<Real> w = solver.solve(v);
    normalize_signed(w);
    if (!all_positive(w)) {
      throw NoConvergence("inverse iteration lost positivity at lambda = " +
                          std::to_string(a.lambda));
    }
    v.swap(w);
  }
  throw NoConvergence("principal eigenpair did not converge in " +
                      std::to_string(options.max_iterations) + " iterations");
}

namespace {

enum class Potential { eta = 0, zeta = 1 };

struct Cache {
  std::mutex mutex;
  std::map<std::tuple<std::uint64_t, int, std::string>, Eigenpair> entries;
};

Cache& cache() {
  static Cache c;
  return c;
}

constexpr std::size_t kCacheCapacity = 50000;

Eigenpair cached_eigenpair(const CoefficientField& coeffs, Potential which, double lambda) {
  if (!std::isfinite(lambda)) throw InvalidArgument("lambda must be finite");
  char key[40];
  std::snprintf(key, sizeof key, "%.11e", lambda);
  const double rounded = std::strtod(key, nullptr);
  auto id = std::make_tuple(coeffs.hash(), static_cast<int>(which), std::string(key));
  {
    std::lock_guard lock(cache().mutex);
    auto it = cache().entries.find(id);
    if (it != cache().entries.end()) return it->second;
  }
  const auto& potential = which == Potential::eta ? coeffs.eta() : coeffs.zeta();
  Eigenpair pair = principal_eigenpair(assemble_operator(coeffs, potential, rounded));
  {
    std::lock_guard lock(cache().mutex);
    if (cache().entries.size() >= kCacheCapacity) cache().entries.clear();
    cache().entries.emplace(std::move(id), pair);
  }
  return pair;
}

}  // namespace

Eigenpair k_of_lambda(const CoefficientField& coeffs, double lambda) {
  return cached_eigenpair(coeffs, Potential::eta, lambda);
}

Eigenpair kbar_of_gamma(const CoefficientField& coeffs, double gamma) {
  if (!(gamma >= 0.0)) throw InvalidArgument("gamma must be nonnegative");
  return cached_eigenpair(coeffs, Potential::zeta, -gamma);
}

void clear_eigen_cache() {
  std::lock_guard lock(cache().mutex);
  cache().entries.clear();
}

std::size_t eigen_cache_size() {
  std::lock_guard lock(cache().mutex);
  return cache().entries.size();
}

}  // namespace frontspeed
