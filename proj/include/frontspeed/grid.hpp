#pragma once

#include <cstddef>
#include <vector>

namespace frontspeed {

/// Uniform sampling of one periodicity cell [0, L).
class PeriodicGrid {
 public:
  PeriodicGrid(double period_length, std::size_t n_cells);

  double period_length() const { return period_length_; }
  std::size_t n_cells() const { return n_cells_; }
  double spacing() const { return spacing_; }
  const std::vector<double>& nodes() const { return nodes_; }
  double node(std::size_t i) const { return nodes_[i]; }

  // Maps any position onto [0, L).
  double wrap(double x) const;

  bool operator==(const PeriodicGrid& other) const {
    return period_length_ == other.period_length_ && n_cells_ == other.n_cells_;
  }

 private:
  double period_length_;
  std::size_t n_cells_;
  double spacing_;
  std::vector<double> nodes_;
};

inline constexpr std::size_t kMinCells = 8;

PeriodicGrid make_grid(double period_length, std::size_t n_cells);

}  // namespace frontspeed
