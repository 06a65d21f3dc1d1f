#include "ldpkit/determlimit.hpp"

#include <cmath>

#include "ldpkit/errors.hpp"

namespace ldpkit {

Vec vector_field(const GeneratorSpec& spec, const Vec& z) {
  Vec f = evaluate_drift(spec.drift_diffusion, z);
  for (const auto& ch : spec.channels) {
    const double net = evaluate_rate(ch.forward, z) - evaluate_rate(ch.backward, z);
    for (int i = 0; i < spec.dimension; ++i) f[i] += ch.nu[i] * net;
  }
  return f;
}

namespace {

long step_count(double t_end, double dt) {
  const long n = std::lround(t_end / dt);
  return n > 0 ? n : 1;
}

}  // namespace

Trajectory integrate_field(const std::function<Vec(const Vec&)>& field, const Vec& z0,
                           const OdeConfig& cfg) {
  if (cfg.dt <= 0.0 || cfg.t_end <= 0.0 || cfg.dt > cfg.t_end)
    throw validation_error("integrate_field: need 0 < dt <= t_end");

  const long n_steps = step_count(cfg.t_end, cfg.dt);
  const double dt = cfg.t_end / static_cast<double>(n_steps);
  const size_t n = z0.size();

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(z0);

  Vec z = z0, k1, k2, k3, k4, tmp(n);
  for (long s = 0; s < n_steps; ++s) {
    k1 = field(z);
    for (size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * dt * k1[i];
    k2 = field(tmp);
    for (size_t i = 0; i < n; ++i) tmp[i] = z[i] + 0.5 * dt * k2[i];
    k3 = field(tmp);
    for (size_t i = 0; i < n; ++i) tmp[i] = z[i] + dt * k3[i];
    k4 = field(tmp);
    for (size_t i = 0; i < n; ++i)
      z[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    if (!all_finite(z)) break;  // blow-up: keep what we have

    const long step = s + 1;
    if (step % cfg.record_stride == 0 || step == n_steps) {
      traj.times.push_back(dt * static_cast<double>(step));
      traj.states.push_back(z);
    }
  }
  return traj;
}

Trajectory integrate_ode(const GeneratorSpec& spec, const Vec& z0, const OdeConfig& cfg) {
  require_valid(spec);
  if (static_cast<int>(z0.size()) != spec.dimension)
    throw validation_error("integrate_ode: z0 dimension mismatch");
  return integrate_field([&spec](const Vec& z) { return vector_field(spec, z); }, z0, cfg);
}

Vec find_fixed_point(const GeneratorSpec& spec, Vec guess, double tol, int max_iters) {
  require_valid(spec);
  const int n = spec.dimension;
  if (static_cast<int>(guess.size()) != n)
    throw validation_error("find_fixed_point: guess dimension mismatch");

  Vec z = std::move(guess);
  for (int iter = 0; iter < max_iters; ++iter) {
    Vec f = vector_field(spec, z);
    if (norm_inf(f) <= tol) return z;

    Matrix jac(n, n);
    for (int j = 0; j < n; ++j) {
      const double h = 1e-6 * (1.0 + std::fabs(z[j]));
      Vec zp = z, zm = z;
      zp[j] += h;
      zm[j] -= h;
      const Vec fp = vector_field(spec, zp);
      const Vec fm = vector_field(spec, zm);
      for (int i = 0; i < n; ++i) jac(i, j) = (fp[i] - fm[i]) / (2.0 * h);
    }
    Vec rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = -f[i];
    Vec step;
    try {
      step = solve_linear(jac, rhs);
    } catch (const numerical_error&) {
      throw numerical_error("find_fixed_point: singular Jacobian");
    }
    for (int i = 0; i < n; ++i) z[i] += step[i];
    if (!all_finite(z)) throw numerical_error("find_fixed_point: iterate diverged");
  }
  throw numerical_error("find_fixed_point: no convergence in " + std::to_string(max_iters) +
                        " iterations");
}

}  // namespace ldpkit
