#include "ldpkit/trajectory.hpp"

#include <algorithm>

#include "ldpkit/errors.hpp"

namespace ldpkit {

Vec state_at(const Trajectory& traj, double t) {
  if (traj.empty()) throw validation_error("state_at: empty trajectory");
  if (t < traj.times.front() || t > traj.times.back())
    throw validation_error("state_at: time outside trajectory range");

  const auto it = std::lower_bound(traj.times.begin(), traj.times.end(), t);
  const size_t hi = static_cast<size_t>(it - traj.times.begin());
  if (hi == 0 || traj.times[hi] == t) return traj.states[hi];

  const size_t lo = hi - 1;
  const double w = (t - traj.times[lo]) / (traj.times[hi] - traj.times[lo]);
  Vec out = traj.states[lo];
  for (size_t i = 0; i < out.size(); ++i)
    out[i] += w * (traj.states[hi][i] - traj.states[lo][i]);
  return out;
}

}  // namespace ldpkit
