// Command-line front end: wires model configs to the library modules and
// writes CSV tables, JSON summaries and a run manifest per invocation.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ldpkit/determlimit.hpp"
#include "ldpkit/errors.hpp"
#include "ldpkit/io.hpp"
#include "ldpkit/ldp.hpp"
#include "ldpkit/master_cit.hpp"
#include "ldpkit/model.hpp"
#include "ldpkit/quasipotential.hpp"
#include "ldpkit/simulate.hpp"
#include "ldpkit/thermo.hpp"
#include "ldpkit/trajectory.hpp"

using nlohmann::json;

namespace {

using namespace ldpkit;

Vec parse_vector(const std::string& text) {
  Vec v;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) {
    try {
      v.push_back(std::stod(cell));
    } catch (const std::exception&) {
      throw validation_error("cannot parse number '" + cell + "' in vector '" + text + "'");
    }
  }
  if (v.empty()) throw validation_error("empty vector argument");
  return v;
}

struct GridAxis {
  double lo = 0.0, hi = 0.0;
  long n = 0;
};

GridAxis parse_grid_axis(const std::string& text) {
  GridAxis g;
  if (std::sscanf(text.c_str(), "%lf:%lf:%ld", &g.lo, &g.hi, &g.n) != 3 || g.n < 1 ||
      !(g.hi > g.lo))
    throw validation_error("bad grid spec '" + text + "', expected lo:hi:count");
  return g;
}

std::vector<GridAxis> parse_grid(const std::string& text) {
  std::vector<GridAxis> axes;
  std::stringstream ss(text);
  std::string cell;
  while (std::getline(ss, cell, ',')) axes.push_back(parse_grid_axis(cell));
  if (axes.empty()) throw validation_error("empty grid spec");
  return axes;
}

std::vector<Vec> grid_points(const std::vector<GridAxis>& axes) {
  std::vector<Vec> pts;
  Vec cur(axes.size(), 0.0);
  std::function<void(size_t)> walk = [&](size_t d) {
    if (d == axes.size()) {
      pts.push_back(cur);
      return;
    }
    const GridAxis& g = axes[d];
    for (long k = 0; k < g.n; ++k) {
      cur[d] = g.n == 1 ? g.lo : g.lo + (g.hi - g.lo) * static_cast<double>(k) / (g.n - 1);
      walk(d + 1);
    }
  };
  walk(0);
  return pts;
}

// Collects inputs/outputs and writes the manifest when the command is done.
struct ManifestScope {
  RunManifest m;
  std::string path;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  ManifestScope(std::string command, std::string manifest_path)
      : path(std::move(manifest_path)) {
    m.command = std::move(command);
  }
  void param(const std::string& key, const std::string& value) { m.parameters[key] = value; }
  void param(const std::string& key, double value) { m.parameters[key] = format_double(value); }
  void param(const std::string& key, long value) { m.parameters[key] = std::to_string(value); }
  void input(const std::string& file) { m.input_digests[file] = file_digest(file); }
  void output(const std::string& file) { m.output_paths.push_back(file); }
  void finish() {
    for (const auto& f : m.output_paths) m.output_digests[f] = file_digest(f);
    m.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(path, m);
  }
};

std::string default_manifest(const std::string& out, const std::string& command) {
  return out.empty() ? command + ".manifest.json" : out + ".manifest.json";
}

void print_summary(const json& j) { std::cout << j.dump() << "\n"; }

std::unique_ptr<ScalarField> build_candidate(const std::string& kind, const std::string& zss,
                                             double a, double d) {
  if (kind == "relent") {
    if (zss.empty()) throw validation_error("relent candidate needs --zss");
    return std::make_unique<RelativeEntropy>(parse_vector(zss));
  }
  if (kind == "ouquad") return std::make_unique<OuQuadratic>(a, d);
  if (kind.empty()) throw validation_error("missing --candidate (relent or ouquad)");
  throw validation_error("unknown candidate '" + kind + "' (use relent or ouquad)");
}

// --- shared flag bundles ----------------------------------------------------

struct SimFlags {
  std::string model, out, bins, z0, manifest, traj_out;
  double epsilon = 0.05, t_end = 1.0, dt = 0.01, time = -1.0;
  long paths = 1000, record_stride = 0, traj_count = 1, min_count = 25;
  std::uint64_t seed = 0;

  void add(CLI::App* cmd, bool with_min_count) {
    cmd->add_option("--model", model, "model config JSON")->required();
    cmd->add_option("--epsilon", epsilon, "noise scale");
    cmd->add_option("--paths", paths, "number of sample paths");
    cmd->add_option("--t-end", t_end, "simulation horizon");
    cmd->add_option("--dt", dt, "diffusion / splitting step");
    cmd->add_option("--seed", seed, "RNG seed");
    cmd->add_option("--record-stride", record_stride,
                    "record every k-th step (0: endpoints only)");
    cmd->add_option("--z0", z0, "initial state, comma separated (default zeros)");
    cmd->add_option("--time", time, "histogram query time (default t-end)");
    cmd->add_option("--bins", bins, "histogram axes lo:hi:n[,lo:hi:n...]");
    cmd->add_option("--out", out, "output CSV")->required();
    cmd->add_option("--manifest", manifest, "manifest path");
    if (with_min_count)
      cmd->add_option("--min-count", min_count, "drop bins under this count");
  }

  SimConfig config(bool need_full_paths) const {
    SimConfig cfg;
    cfg.epsilon = epsilon;
    cfg.t_end = t_end;
    cfg.dt = dt;
    cfg.n_paths = paths;
    cfg.seed = seed;
    if (record_stride > 0) {
      cfg.record_stride = record_stride;
    } else {
      const long n_steps = std::max(1L, std::lround(t_end / dt));
      cfg.record_stride = need_full_paths ? 1 : n_steps;
    }
    const SimConfigReport rep = validate_sim_config(cfg);
    for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    if (!rep.ok()) {
      std::string msg = "invalid simulation flags:";
      for (const auto& v : rep.violations) msg += "\n  - " + v;
      throw validation_error(msg);
    }
    return cfg;
  }

  std::vector<BinAxis> bin_axes() const {
    std::vector<BinAxis> axes;
    if (!bins.empty())
      for (const auto& g : parse_grid(bins))
        axes.push_back({g.lo, g.hi, static_cast<int>(g.n)});
    return axes;
  }

  void record(ManifestScope& ms, const SimConfig& cfg) const {
    ms.m.seed = seed;
    ms.param("model", model);
    ms.param("epsilon", epsilon);
    ms.param("t_end", t_end);
    ms.param("dt", dt);
    ms.param("paths", paths);
    ms.param("record_stride", cfg.record_stride);
    if (!z0.empty()) ms.param("z0", z0);
    if (!bins.empty()) ms.param("bins", bins);
  }
};

struct CandidateFlags {
  std::string kind, zss;
  double a = 1.0, d = 1.0;

  void add(CLI::App* cmd, bool required) {
    auto* opt = cmd->add_option("--candidate", kind, "rate-function candidate: relent or ouquad");
    if (required) opt->required();
    cmd->add_option("--zss", zss, "steady state for relent, comma separated");
    cmd->add_option("--a", a, "relaxation rate for ouquad");
    cmd->add_option("--D", d, "diffusion scale for ouquad");
  }

  std::unique_ptr<ScalarField> build() const { return build_candidate(kind, zss, a, d); }

  void record(ManifestScope& ms) const {
    ms.param("candidate", kind);
    if (!zss.empty()) ms.param("zss", zss);
    ms.param("a", a);
    ms.param("D", d);
  }
};

// --- subcommand bodies -------------------------------------------------------

int run_simulate(const SimFlags& f) {
  ManifestScope ms("simulate",
                   f.manifest.empty() ? default_manifest(f.out, "simulate") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  const Vec z0 = f.z0.empty() ? Vec(spec.dimension, 0.0) : parse_vector(f.z0);
  const bool want_paths = !f.traj_out.empty();
  const SimConfig cfg = f.config(want_paths);
  f.record(ms, cfg);

  const auto paths = simulate_paths(spec, z0, cfg);
  const double query_time = f.time >= 0.0 ? f.time : f.t_end;
  const EnsembleHistogram hist =
      ensemble_histogram(paths, query_time, f.bin_axes(), cfg.epsilon);
  write_histogram_csv(f.out, hist);
  ms.output(f.out);

  if (want_paths) {
    for (long k = 0; k < std::min<long>(f.traj_count, cfg.n_paths); ++k) {
      const std::string file = f.traj_out + std::to_string(k) + ".csv";
      write_trajectory_csv(file, paths[k]);
      ms.output(file);
    }
  }
  ms.finish();
  print_summary({{"paths", cfg.n_paths},
                 {"time", query_time},
                 {"counted", hist.total_counted()},
                 {"out_of_range", hist.out_of_range}});
  return 0;
}

int run_ldf(const SimFlags& f) {
  ManifestScope ms("ldf", f.manifest.empty() ? default_manifest(f.out, "ldf") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  const Vec z0 = f.z0.empty() ? Vec(spec.dimension, 0.0) : parse_vector(f.z0);
  const SimConfig cfg = f.config(false);
  f.record(ms, cfg);
  ms.param("min_count", f.min_count);

  const auto paths = simulate_paths(spec, z0, cfg);
  const double query_time = f.time >= 0.0 ? f.time : f.t_end;
  const EnsembleHistogram hist =
      ensemble_histogram(paths, query_time, f.bin_axes(), cfg.epsilon);
  const auto rf = empirical_rate_function(hist, f.min_count);
  write_rate_function_csv(f.out, rf);
  ms.output(f.out);
  ms.finish();

  double phi_max = 0.0;
  for (const auto& p : rf) phi_max = std::max(phi_max, p.phi_hat);
  print_summary({{"bins_reported", rf.size()}, {"phi_hat_max", phi_max}});
  return 0;
}

struct OdeFlags {
  std::string model, z0, out, manifest;
  double t_end = 1.0, dt = 1e-3;
  long stride = 1;
};

int run_ode(const OdeFlags& f) {
  ManifestScope ms("ode", f.manifest.empty() ? default_manifest(f.out, "ode") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  ms.param("z0", f.z0);
  ms.param("t_end", f.t_end);
  ms.param("dt", f.dt);
  const Trajectory traj = integrate_ode(spec, parse_vector(f.z0), {f.t_end, f.dt, f.stride});
  write_trajectory_csv(f.out, traj);
  ms.output(f.out);
  ms.finish();

  json zf = json::array();
  for (double v : traj.states.back()) zf.push_back(v);
  print_summary({{"t_final", traj.times.back()}, {"z_final", zf}});
  return traj.times.back() < f.t_end ? 3 : 0;  // truncated on blow-up
}

struct FixedPointFlags {
  std::string model, guess, manifest;
  double tol = 1e-10;
};

int run_fixedpoint(const FixedPointFlags& f) {
  ManifestScope ms("fixedpoint",
                   f.manifest.empty() ? default_manifest("", "fixedpoint") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  ms.param("guess", f.guess);
  ms.param("tol", f.tol);
  const Vec z = find_fixed_point(spec, parse_vector(f.guess), f.tol);
  ms.finish();

  json zj = json::array();
  for (double v : z) zj.push_back(v);
  print_summary({{"z_star", zj}, {"f_inf_norm", norm_inf(vector_field(spec, z))}});
  return 0;
}

struct HjeFlags {
  std::string model, grid, zgrid = "-3:3:10", tgrid = "0.1:5:10", out, manifest;
  CandidateFlags cand;
  bool transient = false;
  double a = 1.0, d = 1.0;
};

int run_hje_check(const HjeFlags& f) {
  ManifestScope ms("hje-check",
                   f.manifest.empty() ? default_manifest(f.out, "hje-check") : f.manifest);
  double max_abs = 0.0;

  if (f.transient) {
    ms.param("a", f.a);
    ms.param("D", f.d);
    ms.param("zgrid", f.zgrid);
    ms.param("tgrid", f.tgrid);
    const GridAxis zg = parse_grid_axis(f.zgrid);
    const GridAxis tg = parse_grid_axis(f.tgrid);
    std::vector<Vec> pts;
    Vec residuals;
    for (long i = 0; i < zg.n; ++i) {
      const double z =
          zg.n == 1 ? zg.lo : zg.lo + (zg.hi - zg.lo) * static_cast<double>(i) / (zg.n - 1);
      for (long k = 0; k < tg.n; ++k) {
        const double t =
            tg.n == 1 ? tg.lo : tg.lo + (tg.hi - tg.lo) * static_cast<double>(k) / (tg.n - 1);
        const double r = transient_hje_residual(f.a, f.d, z, t);
        pts.push_back({z, t});  // scan rows are (z, t, residual)
        residuals.push_back(r);
        max_abs = std::max(max_abs, std::fabs(r));
      }
    }
    if (!f.out.empty()) {
      write_residual_scan_csv(f.out, pts, residuals, {"z1", "t"});
      ms.output(f.out);
    }
  } else {
    if (f.model.empty()) throw validation_error("stationary hje-check needs --model");
    if (f.grid.empty()) throw validation_error("stationary hje-check needs --grid");
    ms.input(f.model);
    const GeneratorSpec spec = load_spec(f.model);
    f.cand.record(ms);
    ms.param("grid", f.grid);
    const auto candidate = f.cand.build();
    const auto pts = grid_points(parse_grid(f.grid));
    Vec residuals;
    residuals.reserve(pts.size());
    for (const auto& z : pts) {
      const double r = stationary_hje_residual(spec, *candidate, z);
      residuals.push_back(r);
      max_abs = std::max(max_abs, std::fabs(r));
    }
    if (!f.out.empty()) {
      write_residual_scan_csv(f.out, pts, residuals);
      ms.output(f.out);
    }
  }
  ms.finish();
  print_summary({{"max_abs_residual", max_abs}});
  return 0;
}

struct LyapunovFlags {
  std::string model, z0, out, manifest;
  CandidateFlags cand;
  double t_end = 5.0, dt = 1e-3;
  long stride = 10;
};

int run_lyapunov(const LyapunovFlags& f) {
  ManifestScope ms("lyapunov",
                   f.manifest.empty() ? default_manifest(f.out, "lyapunov") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  f.cand.record(ms);
  const auto candidate = f.cand.build();
  const Trajectory traj =
      integrate_ode(spec, parse_vector(f.z0), {f.t_end, f.dt, f.stride});
  const LyapunovScan scan = lyapunov_scan(spec, *candidate, traj);
  write_lyapunov_csv(f.out, scan);
  ms.output(f.out);
  ms.finish();

  double worst = scan.dphi_dt.empty() ? 0.0 : scan.dphi_dt.front();
  for (double v : scan.dphi_dt) worst = std::max(worst, v);
  print_summary({{"max_dphi_dt", worst}, {"samples", scan.times.size()}});
  return 0;
}

struct HamiltonFlags {
  std::string model, z0, y0, out, manifest;
  double T = 1.0, dt = 1e-3;
  long stride = 10;
};

int run_hamilton(const HamiltonFlags& f) {
  ManifestScope ms("hamilton",
                   f.manifest.empty() ? default_manifest(f.out, "hamilton") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  ms.param("T", f.T);
  ms.param("dt", f.dt);
  const PhasePoint p0{parse_vector(f.z0), parse_vector(f.y0)};
  const PhaseFlow flow = integrate_hamilton(spec, p0, f.T, f.dt, f.stride);
  write_phase_flow_csv(f.out, flow);
  ms.output(f.out);
  ms.finish();
  print_summary({{"h_initial", flow.h_initial},
                 {"max_h_drift", flow.max_h_drift},
                 {"aborted", flow.aborted}});
  return flow.aborted ? 3 : 0;
}

struct PathFlags {
  std::string model, from, to, out, manifest;
  double T = 10.0, gtol = 1e-4;
  int N = 200, max_iters = 50000;
};

int run_path(const PathFlags& f) {
  ManifestScope ms("path", f.manifest.empty() ? default_manifest(f.out, "path") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  ms.param("from", f.from);
  ms.param("to", f.to);
  ms.param("T", f.T);
  ms.param("N", static_cast<long>(f.N));
  MinimizeOptions opts;
  opts.gtol = f.gtol;
  opts.max_iters = f.max_iters;
  const MinimizeResult res =
      minimize_action(spec, parse_vector(f.from), parse_vector(f.to), f.T, f.N, opts);
  if (!f.out.empty()) {
    write_path_csv(f.out, res.path);
    ms.output(f.out);
  }
  ms.finish();
  print_summary({{"action", res.action},
                 {"iters", res.iters},
                 {"gnorm", res.gnorm},
                 {"converged", res.converged}});
  return 0;
}

struct EntropyFlags {
  std::string model, z0, out, manifest;
  CandidateFlags cand;
  double t_end = 5.0, dt = 1e-3;
  long stride = 10;
};

int run_entropy(const EntropyFlags& f) {
  ManifestScope ms("entropy",
                   f.manifest.empty() ? default_manifest(f.out, "entropy") : f.manifest);
  ms.input(f.model);
  const GeneratorSpec spec = load_spec(f.model);
  f.cand.record(ms);
  const auto candidate = f.cand.build();
  const Trajectory traj =
      integrate_ode(spec, parse_vector(f.z0), {f.t_end, f.dt, f.stride});

  std::vector<LedgerRow> rows;
  double worst_identity = 0.0;
  double min_sigma1 = 0.0;
  for (size_t k = 0; k < traj.times.size(); ++k) {
    LedgerRow row;
    row.t = traj.times[k];
    row.terms = entropy_decomposition(spec, *candidate, traj.states[k]);
    const SigmaDecomposition sig =
        cit_sigma(spec, *candidate, traj.states[k], vector_field(spec, traj.states[k]));
    row.sigma1 = sig.sigma1;
    row.sigma2 = sig.sigma2;
    rows.push_back(row);
    worst_identity = std::max(worst_identity, std::fabs(row.terms.identity_residual()));
    min_sigma1 = k == 0 ? sig.sigma1 : std::min(min_sigma1, sig.sigma1);
  }
  write_entropy_ledger_csv(f.out, rows);
  ms.output(f.out);
  ms.finish();
  print_summary({{"rows", rows.size()},
                 {"max_identity_residual", worst_identity},
                 {"min_sigma1", min_sigma1}});
  return 0;
}

struct MasterFlags {
  std::string rates, p0, out, manifest;
  double t_end = 0.0, dt = 1e-3;
};

int run_master(const MasterFlags& f) {
  ManifestScope ms("master",
                   f.manifest.empty() ? default_manifest(f.out, "master") : f.manifest);
  ms.input(f.rates);
  const MasterEquationSpec spec = load_rate_matrix_csv(f.rates);

  Vec p = f.p0.empty() ? Vec(spec.n_states, 1.0 / spec.n_states) : parse_vector(f.p0);
  double drift = 0.0;
  if (f.t_end > 0.0) {
    ms.param("t_end", f.t_end);
    ms.param("dt", f.dt);
    const MasterTrajectory traj = evolve_master(spec, p, f.t_end, f.dt);
    p = traj.probs.back();
    drift = traj.max_conservation_drift;
  }
  const Vec pi = stationary_distribution(spec);
  const EntropyLedger ent = entropy_balance(spec, p);
  const EntropyLedger fre = free_energy_balance(spec, p, pi);
  write_master_ledger_csv(f.out, ent, fre);
  ms.output(f.out);
  ms.finish();

  json pij = json::array(), pj = json::array();
  for (double v : pi) pij.push_back(v);
  for (double v : p) pj.push_back(v);
  print_summary({{"pi", pij},
                 {"p", pj},
                 {"conservation_drift", drift},
                 {"entropy_rate", ent.total_rate},
                 {"free_energy_rate", fre.total_rate}});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
  if (const char* env = std::getenv("LDPKIT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif

  CLI::App app{"ldpkit: mesoscopic jump-diffusion models, their deterministic limits,\n"
               "large-deviations rate functions and entropy balances"};
  app.require_subcommand(1);

  SimFlags sim, ldf;
  CLI::App* c_simulate = app.add_subcommand("simulate", "sample paths, write a histogram");
  sim.add(c_simulate, false);
  c_simulate->add_option("--traj-out", sim.traj_out, "prefix for per-path trajectory CSVs");
  c_simulate->add_option("--traj-count", sim.traj_count, "how many trajectories to write");

  CLI::App* c_ldf = app.add_subcommand("ldf", "empirical rate function from an ensemble");
  ldf.add(c_ldf, true);

  OdeFlags ode;
  CLI::App* c_ode = app.add_subcommand("ode", "integrate the deterministic limit");
  c_ode->add_option("--model", ode.model)->required();
  c_ode->add_option("--z0", ode.z0)->required();
  c_ode->add_option("--t-end", ode.t_end);
  c_ode->add_option("--dt", ode.dt);
  c_ode->add_option("--record-stride", ode.stride);
  c_ode->add_option("--out", ode.out)->required();
  c_ode->add_option("--manifest", ode.manifest);

  FixedPointFlags fix;
  CLI::App* c_fix = app.add_subcommand("fixedpoint", "Newton solve F(z) = 0");
  c_fix->add_option("--model", fix.model)->required();
  c_fix->add_option("--guess", fix.guess)->required();
  c_fix->add_option("--tol", fix.tol);
  c_fix->add_option("--manifest", fix.manifest);

  HjeFlags hje;
  CLI::App* c_hje = app.add_subcommand("hje-check", "stationary / transient HJE residuals");
  c_hje->add_option("--model", hje.model, "model config (stationary mode)");
  hje.cand.add(c_hje, false);
  c_hje->add_option("--grid", hje.grid, "stationary scan grid lo:hi:n[,...]");
  c_hje->add_flag("--transient", hje.transient, "check the transient OU candidate");
  c_hje->add_option("--ou-a", hje.a, "transient OU relaxation rate");
  c_hje->add_option("--ou-D", hje.d, "transient OU diffusion");
  c_hje->add_option("--zgrid", hje.zgrid);
  c_hje->add_option("--tgrid", hje.tgrid);
  c_hje->add_option("--out", hje.out, "scan CSV (optional)");
  c_hje->add_option("--manifest", hje.manifest);

  LyapunovFlags lya;
  CLI::App* c_lya = app.add_subcommand("lyapunov", "d(phi)/dt along the deterministic flow");
  c_lya->add_option("--model", lya.model)->required();
  lya.cand.add(c_lya, true);
  c_lya->add_option("--z0", lya.z0)->required();
  c_lya->add_option("--t-end", lya.t_end);
  c_lya->add_option("--dt", lya.dt);
  c_lya->add_option("--record-stride", lya.stride);
  c_lya->add_option("--out", lya.out)->required();
  c_lya->add_option("--manifest", lya.manifest);

  HamiltonFlags ham;
  CLI::App* c_ham = app.add_subcommand("hamilton", "integrate the fluctuation Hamiltonian");
  c_ham->add_option("--model", ham.model)->required();
  c_ham->add_option("--z0", ham.z0)->required();
  c_ham->add_option("--y0", ham.y0)->required();
  c_ham->add_option("--T", ham.T);
  c_ham->add_option("--dt", ham.dt);
  c_ham->add_option("--record-stride", ham.stride);
  c_ham->add_option("--out", ham.out)->required();
  c_ham->add_option("--manifest", ham.manifest);

  PathFlags pth;
  CLI::App* c_path = app.add_subcommand("path", "least-action path between endpoints");
  c_path->add_option("--model", pth.model)->required();
  c_path->add_option("--from", pth.from)->required();
  c_path->add_option("--to", pth.to)->required();
  c_path->add_option("--T", pth.T);
  c_path->add_option("--N", pth.N);
  c_path->add_option("--gtol", pth.gtol);
  c_path->add_option("--max-iters", pth.max_iters);
  c_path->add_option("--out", pth.out);
  c_path->add_option("--manifest", pth.manifest);

  EntropyFlags ent;
  CLI::App* c_ent = app.add_subcommand("entropy", "entropy decomposition + sigma ledger");
  c_ent->add_option("--model", ent.model)->required();
  ent.cand.add(c_ent, true);
  c_ent->add_option("--z0", ent.z0)->required();
  c_ent->add_option("--t-end", ent.t_end);
  c_ent->add_option("--dt", ent.dt);
  c_ent->add_option("--record-stride", ent.stride);
  c_ent->add_option("--out", ent.out)->required();
  c_ent->add_option("--manifest", ent.manifest);

  MasterFlags mst;
  CLI::App* c_mst = app.add_subcommand("master", "finite-state master equation analysis");
  c_mst->add_option("--rates", mst.rates, "rate matrix CSV")->required();
  c_mst->add_option("--p0", mst.p0, "initial distribution (default uniform)");
  c_mst->add_option("--t-end", mst.t_end, "evolve before the ledger (0: ledger at p0)");
  c_mst->add_option("--dt", mst.dt);
  c_mst->add_option("--out", mst.out)->required();
  c_mst->add_option("--manifest", mst.manifest);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (c_simulate->parsed()) return run_simulate(sim);
    if (c_ldf->parsed()) return run_ldf(ldf);
    if (c_ode->parsed()) return run_ode(ode);
    if (c_fix->parsed()) return run_fixedpoint(fix);
    if (c_hje->parsed()) return run_hje_check(hje);
    if (c_lya->parsed()) return run_lyapunov(lya);
    if (c_ham->parsed()) return run_hamilton(ham);
    if (c_path->parsed()) return run_path(pth);
    if (c_ent->parsed()) return run_entropy(ent);
    if (c_mst->parsed()) return run_master(mst);
  } catch (const validation_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const numerical_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
