#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldpkit/model.hpp"
#include "ldpkit/trajectory.hpp"

namespace ldpkit {

struct SimConfig {
  double epsilon = 0.0;
  double t_end = 0.0;
  double dt = 0.0;         // diffusion / splitting step, also the recording grid
  long n_paths = 1;
  std::uint64_t seed = 0;
  long record_stride = 1;  // record every stride-th grid time
};

// Hard violations as a list; soft issues (epsilon > 1) as warnings.
struct SimConfigReport {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

SimConfigReport validate_sim_config(const SimConfig& cfg);

// Jump part by Gillespie SSA with propensities R_l(z)/eps and jumps eps*nu;
// drift-diffusion part by Euler-Maruyama with noise covariance 2 eps D dt;
// both present: Strang-style split per dt window (half EM step, frozen-rate
// jump sub-evolution over dt, half EM step). Deterministic given
// (seed, path index).
std::vector<Trajectory> simulate_paths(const GeneratorSpec& spec, const Vec& z0,
                                       const SimConfig& cfg);

// Serial reference; must produce bit-identical output to simulate_paths.
std::vector<Trajectory> simulate_paths_serial(const GeneratorSpec& spec, const Vec& z0,
                                              const SimConfig& cfg);

struct BinAxis {
  double lo = 0.0;
  double hi = 0.0;
  int nbins = 0;
  double width() const { return (hi - lo) / nbins; }
};

struct EnsembleHistogram {
  double epsilon = 0.0;
  double time = 0.0;
  std::vector<BinAxis> axes;
  std::vector<long> counts;  // row-major over axes
  long n_paths = 0;
  long out_of_range = 0;

  long total_counted() const;
  Vec bin_center(size_t flat_index) const;
  double bin_volume() const;
};

// States interpolated at `time` and binned. Empty `axes` selects 64 bins per
// dimension over the sample range padded by 5%.
EnsembleHistogram ensemble_histogram(const std::vector<Trajectory>& paths, double time,
                                     std::vector<BinAxis> axes = {}, double epsilon = 0.0);

// Bin-wise counts and metadata must match on axes/time/epsilon.
EnsembleHistogram merge_histograms(const EnsembleHistogram& a, const EnsembleHistogram& b);

struct RateFunctionPoint {
  Vec z;
  double phi_hat = 0.0;
};

// phi_hat = -eps ln(count / (n_paths * bin_volume)), shifted so the reported
// minimum is exactly 0; bins under min_count are omitted.
std::vector<RateFunctionPoint> empirical_rate_function(const EnsembleHistogram& hist,
                                                       long min_count = 25);

}  // namespace ldpkit
