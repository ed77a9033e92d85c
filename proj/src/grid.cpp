#include "frontspeed/grid.hpp"

#include <cmath>
#include <string>

#include "frontspeed/errors.hpp"

namespace frontspeed {

PeriodicGrid::PeriodicGrid(double period_length, std::size_t n_cells)
    : period_length_(period_length), n_cells_(n_cells) {
  if (!(period_length > 0.0) || !std::isfinite(period_length)) {
    throw InvalidArgument("period length must be positive and finite");
  }
  if (n_cells < kMinCells) {
    throw InvalidArgument("grid too coarse: n_cells = " +
                          std::to_string(n_cells) + " < " +
                          std::to_string(kMinCells));
  }
  spacing_ = period_length / static_cast<double>(n_cells);
  nodes_.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    nodes_[i] = static_cast<double>(i) * spacing_;
  }
}

double PeriodicGrid::wrap(double x) const {
  double r = std::fmod(x, period_length_);
  if (r < 0.0) r += period_length_;
  if (r >= period_length_) r = 0.0;
  return r;
}

PeriodicGrid make_grid(double period_length, std::size_t n_cells) {
  return PeriodicGrid(period_length, n_cells);
}

}  // namespace frontspeed
