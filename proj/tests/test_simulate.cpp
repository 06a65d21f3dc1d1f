#include <doctest.h>

#include <cmath>

#include "ldpkit/determlimit.hpp"
#include "ldpkit/errors.hpp"
#include "ldpkit/simulate.hpp"
#include "oracle_models.hpp"

using namespace ldpkit;

namespace {

double ensemble_mean(const std::vector<Trajectory>& paths, double t) {
  double s = 0.0;
  for (const auto& p : paths) s += state_at(p, t)[0];
  return s / static_cast<double>(paths.size());
}

double ensemble_sd(const std::vector<Trajectory>& paths, double t, double mean) {
  double s = 0.0;
  for (const auto& p : paths) {
    const double d = state_at(p, t)[0] - mean;
    s += d * d;
  }
  return std::sqrt(s / static_cast<double>(paths.size() - 1));
}

}  // namespace

TEST_SUITE_BEGIN("simulate");

TEST_CASE("an empty generator leaves the state constant") {
  GeneratorSpec spec;
  spec.dimension = 1;
  spec.drift_diffusion.A0 = {0.0};
  spec.drift_diffusion.A1 = Matrix(1, 1, 0.0);
  spec.drift_diffusion.D = Matrix(1, 1, 0.0);
  const auto paths = simulate_paths(spec, {1.0}, {0.1, 1.0, 0.01, 5, 9, 1});
  for (const auto& p : paths)
    for (const auto& s : p.states) CHECK(s[0] == 1.0);
}

TEST_CASE("config validation") {
  SimConfig bad;
  bad.epsilon = -1.0;
  bad.t_end = 1.0;
  bad.dt = 2.0;
  CHECK(!validate_sim_config(bad).ok());
  SimConfig warn{2.0, 1.0, 0.01, 1, 0, 1};
  CHECK(validate_sim_config(warn).ok());
  CHECK(!validate_sim_config(warn).warnings.empty());
}

TEST_CASE("same seed gives bit-identical trajectories") {
  const SimConfig cfg{0.05, 1.0, 0.01, 16, 1234, 10};
  const auto a = simulate_paths(oracles::ou(), {1.0}, cfg);
  const auto b = simulate_paths(oracles::ou(), {1.0}, cfg);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("parallel and serial drivers agree bitwise") {
  for (const GeneratorSpec& spec :
       {oracles::ou(), oracles::birth_death(), oracles::hybrid()}) {
    const Vec z0 = {1.0};
    const SimConfig cfg{0.05, 1.0, 0.01, 64, 77, 10};
    const auto par = simulate_paths(spec, z0, cfg);
    const auto ser = simulate_paths_serial(spec, z0, cfg);
    REQUIRE(par.size() == ser.size());
    for (size_t i = 0; i < par.size(); ++i) CHECK(par[i] == ser[i]);
  }
}

TEST_CASE("growing the ensemble does not reshuffle earlier paths") {
  SimConfig small{0.05, 0.5, 0.01, 8, 5150, 10};
  SimConfig big = small;
  big.n_paths = 32;
  const auto a = simulate_paths(oracles::birth_death(), {1.0}, small);
  const auto b = simulate_paths(oracles::birth_death(), {1.0}, big);
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("OU ensemble matches the closed-form moments") {
  const double eps = 0.05, t = 5.0;
  const SimConfig cfg{eps, t, 0.01, 5000, 99, 0x7fffffff};
  const auto paths = simulate_paths(oracles::ou(), {1.0}, cfg);
  const double mean = ensemble_mean(paths, t);
  const double sd = ensemble_sd(paths, t, mean);
  const double se = sd / std::sqrt(static_cast<double>(cfg.n_paths));

  CHECK(std::fabs(mean - oracles::ou_mean(1.0, 1.0, t)) < 3.0 * se);
  const double var_expected = oracles::ou_variance(eps, 1.0, 1.0, t);
  CHECK(sd * sd == doctest::Approx(var_expected).epsilon(0.1));
}

TEST_CASE("birth-death SSA mean tracks the deterministic limit") {
  const SimConfig cfg{0.01, 5.0, 0.01, 2000, 4242, 100};  // records at t = 0, 1, ..., 5
  const auto paths = simulate_paths(oracles::birth_death(), {0.0}, cfg);
  for (double t : {1.0, 2.0, 5.0}) {
    const double mean = ensemble_mean(paths, t);
    const double sd = ensemble_sd(paths, t, mean);
    const double se = sd / std::sqrt(static_cast<double>(cfg.n_paths));
    CHECK(std::fabs(mean - oracles::bd_ode(0.0, 2.0, 1.0, t)) < 3.0 * se);
  }
}

TEST_CASE("hybrid splitting matches the deterministic limit at small noise") {
  const SimConfig cfg{0.005, 2.0, 0.002, 2000, 31337, 0x7fffffff};
  const auto paths = simulate_paths(oracles::hybrid(), {0.25}, cfg);
  const Trajectory ode = integrate_ode(oracles::hybrid(), {0.25}, {2.0, 1e-3, 1});
  const double mean = ensemble_mean(paths, 2.0);
  const double sd = ensemble_sd(paths, 2.0, mean);
  const double se = sd / std::sqrt(static_cast<double>(cfg.n_paths));
  CHECK(std::fabs(mean - ode.states.back()[0]) < 4.0 * se);
}

TEST_CASE("jump-only mass-action paths never go negative") {
  const SimConfig cfg{0.02, 4.0, 0.01, 64, 2718, 1};
  const auto paths = simulate_paths(oracles::birth_death(), {0.1}, cfg);
  for (const auto& p : paths)
    for (const auto& s : p.states) CHECK(s[0] >= 0.0);
}

TEST_CASE("histogram of identical constant paths lands in a single bin") {
  GeneratorSpec spec;
  spec.dimension = 1;
  spec.drift_diffusion.A0 = {0.0};
  spec.drift_diffusion.A1 = Matrix(1, 1, 0.0);
  spec.drift_diffusion.D = Matrix(1, 1, 0.0);
  const auto paths = simulate_paths(spec, {1.0}, {0.1, 1.0, 0.1, 100, 1, 1});
  const auto hist = ensemble_histogram(paths, 1.0, {}, 0.1);
  long nonzero = 0;
  for (long c : hist.counts)
    if (c > 0) {
      ++nonzero;
      CHECK(c == 100);
    }
  CHECK(nonzero == 1);
  CHECK(hist.out_of_range == 0);
}

TEST_CASE("histogram counts plus out-of-range equals the ensemble size") {
  const SimConfig cfg{0.05, 2.0, 0.01, 500, 7, 0x7fffffff};
  const auto paths = simulate_paths(oracles::ou(), {1.0}, cfg);
  const auto hist = ensemble_histogram(paths, 2.0, {{-0.1, 0.1, 8}}, cfg.epsilon);
  CHECK(hist.total_counted() + hist.out_of_range == cfg.n_paths);
  CHECK(hist.out_of_range > 0);
}

TEST_CASE("histogram merge of disjoint path sets equals histogram of the union") {
  const SimConfig cfg_a{0.05, 1.0, 0.01, 300, 100, 0x7fffffff};
  SimConfig cfg_b = cfg_a;
  cfg_b.seed = 200;
  const auto pa = simulate_paths(oracles::ou(), {0.5}, cfg_a);
  const auto pb = simulate_paths(oracles::ou(), {0.5}, cfg_b);

  const std::vector<BinAxis> axes = {{-1.0, 1.5, 32}};
  const auto ha = ensemble_histogram(pa, 1.0, axes, cfg_a.epsilon);
  const auto hb = ensemble_histogram(pb, 1.0, axes, cfg_a.epsilon);

  std::vector<Trajectory> all = pa;
  all.insert(all.end(), pb.begin(), pb.end());
  const auto hu = ensemble_histogram(all, 1.0, axes, cfg_a.epsilon);

  const auto hm = merge_histograms(ha, hb);
  const auto hm2 = merge_histograms(hb, ha);  // commutes
  CHECK(hm.counts == hu.counts);
  CHECK(hm2.counts == hu.counts);
  CHECK(hm.n_paths == hu.n_paths);
  CHECK(hm.out_of_range == hu.out_of_range);
}

TEST_CASE("OU histogram mode sits at the stationary mean") {
  const SimConfig cfg{0.05, 5.0, 0.01, 20000, 11, 0x7fffffff};
  const auto paths = simulate_paths(oracles::ou(), {1.0}, cfg);
  const auto hist = ensemble_histogram(paths, 5.0, {}, cfg.epsilon);
  long best = 0;
  size_t best_bin = 0;
  for (size_t b = 0; b < hist.counts.size(); ++b)
    if (hist.counts[b] > best) {
      best = hist.counts[b];
      best_bin = b;
    }
  CHECK(std::fabs(hist.bin_center(best_bin)[0]) <= hist.axes[0].width());
}

TEST_CASE("empirical rate function: mode bin is exactly zero after the shift") {
  const SimConfig cfg{0.05, 2.0, 0.01, 5000, 21, 0x7fffffff};
  const auto paths = simulate_paths(oracles::ou(), {0.0}, cfg);
  const auto hist = ensemble_histogram(paths, 2.0, {}, cfg.epsilon);
  const auto rf = empirical_rate_function(hist, 25);
  double lo = 1e300;
  for (const auto& p : rf) lo = std::min(lo, p.phi_hat);
  CHECK(lo == 0.0);
}

TEST_CASE("empirical rate function approaches the OU quadratic") {
  const double eps = 0.05;
  const SimConfig cfg{eps, 5.0, 0.01, 100000, 1000, 0x7fffffff};
  const auto paths = simulate_paths(oracles::ou(), {1.0}, cfg);
  const auto hist = ensemble_histogram(paths, 5.0, {}, eps);
  const auto rf = empirical_rate_function(hist, 25);
  double worst = 0.0;
  for (const auto& p : rf) {
    if (std::fabs(p.z[0]) > 1.5) continue;
    worst = std::max(worst, std::fabs(p.phi_hat - 0.5 * p.z[0] * p.z[0]));
  }
  CHECK(worst <= 0.1);
}

TEST_CASE("empirical rate function fails cleanly when nothing clears min_count") {
  const SimConfig cfg{0.05, 1.0, 0.01, 50, 3, 0x7fffffff};
  const auto paths = simulate_paths(oracles::ou(), {0.0}, cfg);
  const auto hist = ensemble_histogram(paths, 1.0, {}, cfg.epsilon);
  CHECK_THROWS_AS(empirical_rate_function(hist, 1000), validation_error);
}

TEST_CASE("interpolation outside the recorded range is rejected") {
  const auto paths = simulate_paths(oracles::ou(), {0.0}, {0.05, 1.0, 0.01, 4, 3, 10});
  CHECK_THROWS_AS(ensemble_histogram(paths, 2.0, {}, 0.05), validation_error);
}

TEST_SUITE_END();
