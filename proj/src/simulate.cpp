#include "ldpkit/simulate.hpp"

#include <algorithm>
#include <cmath>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ldpkit/errors.hpp"
#include "ldpkit/rng.hpp"

namespace ldpkit {

namespace {

double ipow(double base, int e) {
  double r = 1.0;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

// Rate evaluation for the sampler: clamps to 0 instead of throwing when a
// mass-action base has gone negative, so rates vanish at the boundary.
double propensity(const RateLaw& law, const Vec& z) {
  if (law.kind == RateKind::constant) return law.k;
  double r = law.k;
  for (size_t i = 0; i < z.size(); ++i) {
    const int o = law.order[i];
    if (o == 0) continue;
    if (z[i] < 0.0) return 0.0;
    r *= ipow(z[i], o);
  }
  return r;
}

struct DirectedChannel {
  std::vector<double> jump;  // eps * nu, precomputed
  RateLaw law;
};

struct SimModel {
  int n = 0;
  std::vector<DirectedChannel> channels;
  const DriftDiffusion* dd = nullptr;
  Matrix chol;  // of D
  bool has_jump = false;
  bool has_drift = false;
  bool has_diff = false;
};

SimModel build_sim_model(const GeneratorSpec& spec, double epsilon) {
  SimModel m;
  m.n = spec.dimension;
  m.dd = &spec.drift_diffusion;
  m.has_drift = spec.drift_diffusion.has_drift();
  m.has_diff = spec.drift_diffusion.has_diffusion();
  m.has_jump = !spec.channels.empty();
  for (const auto& ch : spec.channels) {
    DirectedChannel fwd, bwd;
    fwd.jump.resize(m.n);
    bwd.jump.resize(m.n);
    for (int i = 0; i < m.n; ++i) {
      fwd.jump[i] = epsilon * ch.nu[i];
      bwd.jump[i] = -epsilon * ch.nu[i];
    }
    fwd.law = ch.forward;
    bwd.law = ch.backward;
    m.channels.push_back(std::move(fwd));
    m.channels.push_back(std::move(bwd));
  }
  if (m.has_diff && !cholesky_psd(spec.drift_diffusion.D, m.chol))
    throw numerical_error("simulate: diffusion matrix is not PSD");
  return m;
}

struct Recorder {
  Trajectory traj;
  long stride;
  double dt;
  double t_end;
  long n_steps;

  Recorder(const Vec& z0, double dt_, double t_end_, long n_steps_, long stride_)
      : stride(stride_), dt(dt_), t_end(t_end_), n_steps(n_steps_) {
    traj.times.push_back(0.0);
    traj.states.push_back(z0);
  }

  void at_step(long step, const Vec& z) {
    if (step % stride == 0 || step == n_steps) {
      traj.times.push_back(step == n_steps ? t_end : dt * static_cast<double>(step));
      traj.states.push_back(z);
    }
  }
};

void em_step(const SimModel& m, Vec& z, double h, double epsilon, Rng& rng, Vec& drift,
             Vec& noise) {
  const int n = m.n;
  for (int i = 0; i < n; ++i) {
    double s = m.dd->A0[i];
    for (int j = 0; j < n; ++j) s += m.dd->A1(i, j) * z[j];
    drift[i] = s;
  }
  if (m.has_diff) {
    const double scale = std::sqrt(2.0 * epsilon * h);
    for (int i = 0; i < n; ++i) noise[i] = rng.normal();
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j <= i; ++j) s += m.chol(i, j) * noise[j];
      z[i] += drift[i] * h + scale * s;
    }
  } else {
    for (int i = 0; i < n; ++i) z[i] += drift[i] * h;
  }
}

// Exact SSA for the jump part alone over [0, t_end]; recording on the grid of
// dt-sized steps so interpolation queries land on sampled states.
Trajectory run_ssa(const SimModel& m, const Vec& z0, const SimConfig& cfg, Rng& rng,
                   long n_steps, double dt) {
  Recorder rec(z0, dt, cfg.t_end, n_steps, cfg.record_stride);
  Vec z = z0;
  const size_t nch = m.channels.size();
  Vec props(nch, 0.0);

  double t = 0.0;
  long next_step = 1;
  while (true) {
    double a0 = 0.0;
    for (size_t c = 0; c < nch; ++c) {
      props[c] = propensity(m.channels[c].law, z) / cfg.epsilon;
      a0 += props[c];
    }
    double t_next = a0 > 0.0 ? t + rng.exponential(a0) : cfg.t_end;

    // grid times passed before the next event carry the current state
    while (next_step <= n_steps &&
           (next_step == n_steps ? cfg.t_end : dt * next_step) <= t_next) {
      rec.at_step(next_step, z);
      ++next_step;
    }
    if (t_next >= cfg.t_end || a0 <= 0.0) break;

    double u = rng.uniform() * a0;
    size_t pick = nch - 1;
    for (size_t c = 0; c < nch; ++c) {
      u -= props[c];
      if (u <= 0.0) {
        pick = c;
        break;
      }
    }
    for (int i = 0; i < m.n; ++i) z[i] += m.channels[pick].jump[i];
    t = t_next;
  }
  return rec.traj;
}

// Frozen-rate jump sub-evolution over one window, exact in law for the
// frozen propensities.
void frozen_jump_window(const SimModel& m, Vec& z, double window, double epsilon, Rng& rng,
                        Vec& props) {
  const size_t nch = m.channels.size();
  double a0 = 0.0;
  for (size_t c = 0; c < nch; ++c) {
    props[c] = propensity(m.channels[c].law, z) / epsilon;
    a0 += props[c];
  }
  if (a0 <= 0.0) return;
  double t = rng.exponential(a0);
  while (t <= window) {
    double u = rng.uniform() * a0;
    size_t pick = nch - 1;
    for (size_t c = 0; c < nch; ++c) {
      u -= props[c];
      if (u <= 0.0) {
        pick = c;
        break;
      }
    }
    for (int i = 0; i < m.n; ++i) z[i] += m.channels[pick].jump[i];
    t += rng.exponential(a0);
  }
}

Trajectory simulate_one(const SimModel& m, const Vec& z0, const SimConfig& cfg,
                        long path_index) {
  Rng rng(cfg.seed, static_cast<std::uint64_t>(path_index));
  const long n_steps =
      std::lround(cfg.t_end / cfg.dt) > 0 ? std::lround(cfg.t_end / cfg.dt) : 1;
  const double dt = cfg.t_end / static_cast<double>(n_steps);

  if (m.has_jump && !m.has_drift && !m.has_diff)
    return run_ssa(m, z0, cfg, rng, n_steps, dt);

  Recorder rec(z0, dt, cfg.t_end, n_steps, cfg.record_stride);
  Vec z = z0;
  Vec drift(m.n), noise(m.n), props(m.channels.size());

  if (!m.has_jump) {
    for (long step = 1; step <= n_steps; ++step) {
      em_step(m, z, dt, cfg.epsilon, rng, drift, noise);
      rec.at_step(step, z);
    }
    return rec.traj;
  }

  // hybrid: Strang-style split, jump rates refreshed once per window
  for (long step = 1; step <= n_steps; ++step) {
    em_step(m, z, 0.5 * dt, cfg.epsilon, rng, drift, noise);
    frozen_jump_window(m, z, dt, cfg.epsilon, rng, props);
    em_step(m, z, 0.5 * dt, cfg.epsilon, rng, drift, noise);
    rec.at_step(step, z);
  }
  return rec.traj;
}

}  // namespace

SimConfigReport validate_sim_config(const SimConfig& cfg) {
  SimConfigReport rep;
  if (cfg.epsilon <= 0.0) rep.violations.push_back("epsilon must be > 0");
  if (cfg.t_end <= 0.0) rep.violations.push_back("t_end must be > 0");
  if (cfg.dt <= 0.0) rep.violations.push_back("dt must be > 0");
  if (cfg.dt > cfg.t_end) rep.violations.push_back("dt must be <= t_end");
  if (cfg.n_paths < 1) rep.violations.push_back("n_paths must be >= 1");
  if (cfg.record_stride < 1) rep.violations.push_back("record_stride must be >= 1");
  if (cfg.epsilon > 1.0)
    rep.warnings.push_back("epsilon > 1: the small-noise expansion is a poor guide here");
  return rep;
}

namespace {

SimModel checked_model(const GeneratorSpec& spec, const Vec& z0, const SimConfig& cfg) {
  require_valid(spec);
  if (static_cast<int>(z0.size()) != spec.dimension)
    throw validation_error("simulate: z0 dimension mismatch");
  const SimConfigReport rep = validate_sim_config(cfg);
  if (!rep.ok()) {
    std::string msg = "invalid simulation config:";
    for (const auto& v : rep.violations) msg += "\n  - " + v;
    throw validation_error(msg);
  }
  return build_sim_model(spec, cfg.epsilon);
}

}  // namespace

std::vector<Trajectory> simulate_paths(const GeneratorSpec& spec, const Vec& z0,
                                       const SimConfig& cfg) {
  const SimModel m = checked_model(spec, z0, cfg);
  std::vector<Trajectory> out(cfg.n_paths);
#pragma omp parallel for schedule(dynamic, 64)
  for (long idx = 0; idx < cfg.n_paths; ++idx) out[idx] = simulate_one(m, z0, cfg, idx);
  return out;
}

std::vector<Trajectory> simulate_paths_serial(const GeneratorSpec& spec, const Vec& z0,
                                              const SimConfig& cfg) {
  const SimModel m = checked_model(spec, z0, cfg);
  std::vector<Trajectory> out(cfg.n_paths);
  for (long idx = 0; idx < cfg.n_paths; ++idx) out[idx] = simulate_one(m, z0, cfg, idx);
  return out;
}

long EnsembleHistogram::total_counted() const {
  long s = 0;
  for (long c : counts) s += c;
  return s;
}

double EnsembleHistogram::bin_volume() const {
  double v = 1.0;
  for (const auto& ax : axes) v *= ax.width();
  return v;
}

Vec EnsembleHistogram::bin_center(size_t flat_index) const {
  Vec center(axes.size());
  size_t rem = flat_index;
  for (size_t d = axes.size(); d-- > 0;) {
    const size_t idx = rem % axes[d].nbins;
    rem /= axes[d].nbins;
    center[d] = axes[d].lo + (static_cast<double>(idx) + 0.5) * axes[d].width();
  }
  return center;
}

EnsembleHistogram ensemble_histogram(const std::vector<Trajectory>& paths, double time,
                                     std::vector<BinAxis> axes, double epsilon) {
  if (paths.empty()) throw validation_error("ensemble_histogram: empty path set");
  for (const auto& p : paths)
    if (p.empty() || time < p.times.front() || time > p.times.back())
      throw validation_error("ensemble_histogram: time outside a trajectory's range");

  const long n_paths = static_cast<long>(paths.size());
  const size_t dim = paths.front().states.front().size();

  std::vector<Vec> samples(n_paths);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n_paths; ++i) samples[i] = state_at(paths[i], time);

  if (axes.empty()) {
    axes.resize(dim);
    for (size_t d = 0; d < dim; ++d) {
      double lo = samples[0][d], hi = samples[0][d];
      for (const auto& s : samples) {
        lo = std::min(lo, s[d]);
        hi = std::max(hi, s[d]);
      }
      double pad = 0.05 * (hi - lo);
      if (pad <= 0.0) pad = std::max(0.5, 0.05 * std::fabs(lo));
      axes[d] = {lo - pad, hi + pad, 64};
    }
  }
  for (const auto& ax : axes)
    if (ax.nbins < 1 || !(ax.hi > ax.lo))
      throw validation_error("ensemble_histogram: bad bin axis");

  EnsembleHistogram hist;
  hist.epsilon = epsilon;
  hist.time = time;
  hist.axes = axes;
  hist.n_paths = n_paths;
  size_t total_bins = 1;
  for (const auto& ax : axes) total_bins *= static_cast<size_t>(ax.nbins);
  hist.counts.assign(total_bins, 0);

  long oor = 0;
#pragma omp parallel
  {
    std::vector<long> local(total_bins, 0);
    long local_oor = 0;
#pragma omp for nowait schedule(static)
    for (long i = 0; i < n_paths; ++i) {
      size_t flat = 0;
      bool inside = true;
      for (size_t d = 0; d < dim; ++d) {
        const auto& ax = axes[d];
        const double x = samples[i][d];
        if (x < ax.lo || x > ax.hi) {
          inside = false;
          break;
        }
        long idx = static_cast<long>((x - ax.lo) / ax.width());
        if (idx >= ax.nbins) idx = ax.nbins - 1;
        flat = flat * static_cast<size_t>(ax.nbins) + static_cast<size_t>(idx);
      }
      if (inside)
        ++local[flat];
      else
        ++local_oor;
    }
#pragma omp critical
    {
      for (size_t b = 0; b < total_bins; ++b) hist.counts[b] += local[b];
      oor += local_oor;
    }
  }
  hist.out_of_range = oor;
  return hist;
}

EnsembleHistogram merge_histograms(const EnsembleHistogram& a, const EnsembleHistogram& b) {
  if (a.axes.size() != b.axes.size() || a.time != b.time || a.epsilon != b.epsilon)
    throw validation_error("merge_histograms: incompatible histograms");
  for (size_t d = 0; d < a.axes.size(); ++d)
    if (a.axes[d].lo != b.axes[d].lo || a.axes[d].hi != b.axes[d].hi ||
        a.axes[d].nbins != b.axes[d].nbins)
      throw validation_error("merge_histograms: mismatched axes");

  EnsembleHistogram out = a;
  for (size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
  out.n_paths += b.n_paths;
  out.out_of_range += b.out_of_range;
  return out;
}

std::vector<RateFunctionPoint> empirical_rate_function(const EnsembleHistogram& hist,
                                                       long min_count) {
  if (hist.epsilon <= 0.0)
    throw validation_error("empirical_rate_function: histogram carries no epsilon");
  const double vol = hist.bin_volume();
  std::vector<RateFunctionPoint> pts;
  for (size_t b = 0; b < hist.counts.size(); ++b) {
    if (hist.counts[b] < min_count) continue;
    const double density =
        static_cast<double>(hist.counts[b]) / (static_cast<double>(hist.n_paths) * vol);
    pts.push_back({hist.bin_center(b), -hist.epsilon * std::log(density)});
  }
  if (pts.empty())
    throw validation_error("empirical_rate_function: every bin is below min_count");
  double lo = pts.front().phi_hat;
  for (const auto& p : pts) lo = std::min(lo, p.phi_hat);
  for (auto& p : pts) p.phi_hat -= lo;
  return pts;
}

}  // namespace ldpkit
