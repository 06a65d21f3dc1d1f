#pragma once

#include <vector>

#include "ldpkit/linalg.hpp"

namespace ldpkit {

// Sampled path: strictly increasing times starting at 0, one state per time.
struct Trajectory {
  std::vector<double> times;
  std::vector<Vec> states;

  bool empty() const { return times.empty(); }
  double t_end() const { return times.empty() ? 0.0 : times.back(); }

  bool operator==(const Trajectory& o) const { return times == o.times && states == o.states; }
};

// Linear interpolation between recorded points; t must lie in [0, t_end].
Vec state_at(const Trajectory& traj, double t);

}  // namespace ldpkit
