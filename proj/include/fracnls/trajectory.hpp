#pragma once

#include <stdexcept>
#include <vector>

#include "fracnls/grid.hpp"

namespace fracnls {

/// Uniform time lattice t_m = m T / nt, m = 0..nt.
class TimeGrid {
 public:
  TimeGrid(double horizon, int steps) : horizon_(horizon), steps_(steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("time horizon must be positive");
    if (steps < 2) throw std::invalid_argument("time grid needs at least two steps");
  }

  double horizon() const { return horizon_; }
  int steps() const { return steps_; }
  double dt() const { return horizon_ / steps_; }
  double time(int m) const { return horizon_ * m / steps_; }

 private:
  double horizon_;
  int steps_;
};

/// Solution slices u(t_m), m = 0..nt.
struct Trajectory {
  TimeGrid time_grid;
  std::vector<Field> slices;

  const Field& at(int m) const { return slices.at(m); }
};

}  // namespace fracnls
