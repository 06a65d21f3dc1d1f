#include "ldpkit/ldp.hpp"

#include <cmath>

#include "ldpkit/determlimit.hpp"
#include "ldpkit/errors.hpp"

namespace ldpkit {

namespace {

constexpr double kExpArgMax = 700.0;

double guarded_exp(double x) {
  if (std::fabs(x) > kExpArgMax)
    throw numerical_error("momentum out of range: |nu.y| > 700 overflows exp");
  return std::exp(x);
}

double nu_dot(const std::vector<int>& nu, const Vec& y) {
  double s = 0.0;
  for (size_t i = 0; i < nu.size(); ++i) s += nu[i] * y[i];
  return s;
}

}  // namespace

DiscretePath linear_path(const Vec& z_start, const Vec& z_end, double T, int N) {
  if (N < 1) throw validation_error("linear_path: need N >= 1");
  DiscretePath p;
  p.times.resize(N + 1);
  p.states.resize(N + 1);
  const double dt = T / N;
  for (int k = 0; k <= N; ++k) {
    p.times[k] = dt * k;
    const double w = static_cast<double>(k) / N;
    Vec z(z_start.size());
    for (size_t i = 0; i < z.size(); ++i) z[i] = (1.0 - w) * z_start[i] + w * z_end[i];
    p.states[k] = std::move(z);
  }
  return p;
}

double hamiltonian(const GeneratorSpec& spec, const Vec& z, const Vec& y) {
  const auto& dd = spec.drift_diffusion;
  double h = dot(evaluate_drift(dd, z), y) + quadratic_form(dd.D, y);
  for (const auto& ch : spec.channels) {
    const double ny = nu_dot(ch.nu, y);
    h += evaluate_rate(ch.forward, z) * (guarded_exp(ny) - 1.0);
    h += evaluate_rate(ch.backward, z) * (guarded_exp(-ny) - 1.0);
  }
  return h;
}

PhaseRhs hamilton_rhs(const GeneratorSpec& spec, const PhasePoint& p) {
  const int n = spec.dimension;
  const auto& dd = spec.drift_diffusion;

  PhaseRhs rhs;
  rhs.dz = evaluate_drift(dd, p.z);
  const Vec dy_diff = matvec(dd.D, p.y);
  for (int i = 0; i < n; ++i) rhs.dz[i] += 2.0 * dy_diff[i];

  // dy/dt = -dH/dz; affine drift contributes A1^T y, D is state-independent.
  rhs.dy = matvec_transpose(dd.A1, p.y);

  for (const auto& ch : spec.channels) {
    const double ny = nu_dot(ch.nu, p.y);
    const double ef = guarded_exp(ny);
    const double eb = guarded_exp(-ny);
    const double jump_flux = evaluate_rate(ch.forward, p.z) * ef -
                             evaluate_rate(ch.backward, p.z) * eb;
    for (int i = 0; i < n; ++i) rhs.dz[i] += ch.nu[i] * jump_flux;

    const Vec gf = rate_gradient(ch.forward, p.z);
    const Vec gb = rate_gradient(ch.backward, p.z);
    for (int i = 0; i < n; ++i) rhs.dy[i] += gf[i] * (ef - 1.0) + gb[i] * (eb - 1.0);
  }
  for (int i = 0; i < n; ++i) rhs.dy[i] = -rhs.dy[i];
  return rhs;
}

PhaseFlow integrate_hamilton(const GeneratorSpec& spec, const PhasePoint& p0, double T,
                             double dt, long record_stride) {
  require_valid(spec);
  if (dt <= 0.0 || T <= 0.0 || dt > T)
    throw validation_error("integrate_hamilton: need 0 < dt <= T");

  const int n = spec.dimension;
  const long n_steps = std::lround(T / dt) > 0 ? std::lround(T / dt) : 1;
  const double h = T / static_cast<double>(n_steps);

  PhaseFlow flow;
  flow.h_initial = hamiltonian(spec, p0.z, p0.y);
  flow.times.push_back(0.0);
  flow.points.push_back(p0);

  PhasePoint p = p0;
  auto axpy = [n](const PhasePoint& base, double a, const PhaseRhs& d) {
    PhasePoint out = base;
    for (int i = 0; i < n; ++i) {
      out.z[i] += a * d.dz[i];
      out.y[i] += a * d.dy[i];
    }
    return out;
  };

  for (long s = 0; s < n_steps; ++s) {
    PhasePoint next = p;
    try {
      const PhaseRhs k1 = hamilton_rhs(spec, p);
      const PhaseRhs k2 = hamilton_rhs(spec, axpy(p, 0.5 * h, k1));
      const PhaseRhs k3 = hamilton_rhs(spec, axpy(p, 0.5 * h, k2));
      const PhaseRhs k4 = hamilton_rhs(spec, axpy(p, h, k3));
      for (int i = 0; i < n; ++i) {
        next.z[i] += h / 6.0 * (k1.dz[i] + 2.0 * k2.dz[i] + 2.0 * k3.dz[i] + k4.dz[i]);
        next.y[i] += h / 6.0 * (k1.dy[i] + 2.0 * k2.dy[i] + 2.0 * k3.dy[i] + k4.dy[i]);
      }
      if (!all_finite(next.z) || !all_finite(next.y)) {
        flow.aborted = true;
        break;
      }
      const double hh = hamiltonian(spec, next.z, next.y);
      flow.max_h_drift = std::max(flow.max_h_drift, std::fabs(hh - flow.h_initial));
    } catch (const numerical_error&) {
      flow.aborted = true;
      break;
    } catch (const std::domain_error&) {
      flow.aborted = true;
      break;
    }
    p = std::move(next);
    const long step = s + 1;
    if (step % record_stride == 0 || step == n_steps) {
      flow.times.push_back(h * static_cast<double>(step));
      flow.points.push_back(p);
    }
  }
  return flow;
}

namespace {

// dH/dy and the y-Hessian of H at fixed z.
void momentum_derivatives(const GeneratorSpec& spec, const Vec& z, const Vec& y, Vec& grad,
                          Matrix& hess) {
  const int n = spec.dimension;
  const auto& dd = spec.drift_diffusion;

  grad = evaluate_drift(dd, z);
  const Vec dy = matvec(dd.D, y);
  for (int i = 0; i < n; ++i) grad[i] += 2.0 * dy[i];

  hess = Matrix(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) hess(i, j) = 2.0 * dd.D(i, j);

  for (const auto& ch : spec.channels) {
    const double ny = nu_dot(ch.nu, y);
    const double rf = evaluate_rate(ch.forward, z) * guarded_exp(ny);
    const double rb = evaluate_rate(ch.backward, z) * guarded_exp(-ny);
    for (int i = 0; i < n; ++i) {
      grad[i] += ch.nu[i] * (rf - rb);
      for (int j = 0; j < n; ++j) hess(i, j) += ch.nu[i] * ch.nu[j] * (rf + rb);
    }
  }
}

}  // namespace

Vec legendre_momentum(const GeneratorSpec& spec, const Vec& z, const Vec& zdot, double tol,
                      int max_iters) {
  const int n = spec.dimension;
  Vec y(n, 0.0);
  Vec grad;
  Matrix hess;

  // psi(y) = H(z,y) - y.zdot is strictly convex wherever the Hessian is
  // nondegenerate; Newton with backtracking on psi.
  double psi = hamiltonian(spec, z, y) - dot(y, zdot);
  for (int iter = 0; iter < max_iters; ++iter) {
    momentum_derivatives(spec, z, y, grad, hess);
    Vec resid(n);
    for (int i = 0; i < n; ++i) resid[i] = grad[i] - zdot[i];
    if (norm_inf(resid) <= tol) return y;

    Vec step;
    try {
      Vec rhs(n);
      for (int i = 0; i < n; ++i) rhs[i] = -resid[i];
      step = solve_linear(hess, rhs);
    } catch (const numerical_error&) {
      throw numerical_error("legendre_momentum: degenerate Hessian, zdot unattainable");
    }

    double alpha = 1.0;
    bool moved = false;
    const double slope = dot(resid, step);  // descent direction: slope < 0
    for (int bt = 0; bt < 60; ++bt) {
      Vec trial = y;
      for (int i = 0; i < n; ++i) trial[i] += alpha * step[i];
      double psi_trial;
      try {
        psi_trial = hamiltonian(spec, z, trial) - dot(trial, zdot);
      } catch (const numerical_error&) {
        alpha *= 0.5;
        continue;
      }
      // FP slack keeps full Newton steps acceptable once psi flattens out
      const double fp_slack = 1e-14 * (1.0 + std::fabs(psi));
      if (psi_trial <= psi + 1e-4 * alpha * slope + fp_slack) {
        y = std::move(trial);
        psi = psi_trial;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved)
      throw numerical_error("legendre_momentum: line search failed, zdot unattainable");
  }
  throw numerical_error("legendre_momentum: no convergence (zdot outside attainable cone)");
}

double lagrangian(const GeneratorSpec& spec, const Vec& z, const Vec& zdot) {
  const Vec y = legendre_momentum(spec, z, zdot);
  return dot(y, zdot) - hamiltonian(spec, z, y);
}

namespace {

// Action contribution of one segment, midpoint rule.
double segment_action(const GeneratorSpec& spec, const Vec& za, const Vec& zb, double dt) {
  const size_t n = za.size();
  Vec mid(n), vel(n);
  for (size_t i = 0; i < n; ++i) {
    mid[i] = 0.5 * (za[i] + zb[i]);
    vel[i] = (zb[i] - za[i]) / dt;
  }
  return lagrangian(spec, mid, vel) * dt;
}

}  // namespace

double path_action(const GeneratorSpec& spec, const DiscretePath& path) {
  if (path.segments() < 1) throw validation_error("path_action: need at least one segment");
  const double dt = path.dt();
  double s = 0.0;
  for (int k = 0; k < path.segments(); ++k)
    s += segment_action(spec, path.states[k], path.states[k + 1], dt);
  return s;
}

MinimizeResult minimize_action(const GeneratorSpec& spec, const Vec& z_start,
                               const Vec& z_end, double T, int N,
                               const MinimizeOptions& opts) {
  require_valid(spec);
  if (N < 2) throw validation_error("minimize_action: need N >= 2");
  const int n = spec.dimension;
  const double dt = T / N;

  DiscretePath path = linear_path(z_start, z_end, T, N);
  double action = path_action(spec, path);

  // d(action)/d(node k dim d) touches only segments k-1 and k.
  auto node_gradient = [&](const DiscretePath& p, int k, int d) {
    const double h = opts.fd_step * (1.0 + std::fabs(p.states[k][d]));
    Vec zp = p.states[k], zm = p.states[k];
    zp[d] += h;
    zm[d] -= h;
    const double sp = segment_action(spec, p.states[k - 1], zp, dt) +
                      segment_action(spec, zp, p.states[k + 1], dt);
    const double sm = segment_action(spec, p.states[k - 1], zm, dt) +
                      segment_action(spec, zm, p.states[k + 1], dt);
    return (sp - sm) / (2.0 * h);
  };

  std::vector<Vec> grad(N + 1, Vec(n, 0.0));
  double alpha = 1.0;
  int iter = 0;
  double gnorm = 0.0;

  for (; iter < opts.max_iters; ++iter) {
    gnorm = 0.0;
    double gsq = 0.0;
    for (int k = 1; k < N; ++k) {
      for (int d = 0; d < n; ++d) {
        const double g = node_gradient(path, k, d);
        grad[k][d] = g;
        gnorm = std::max(gnorm, std::fabs(g));
        gsq += g * g;
      }
    }
    if (gnorm <= opts.gtol) return {path, action, iter, gnorm, true};

    alpha = std::min(alpha * 2.0, 1.0);
    bool moved = false;
    bool rejected_on_error = false;
    for (int bt = 0; bt < 60; ++bt) {
      DiscretePath trial = path;
      for (int k = 1; k < N; ++k)
        for (int d = 0; d < n; ++d) trial.states[k][d] -= alpha * grad[k][d];
      double trial_action;
      try {
        trial_action = path_action(spec, trial);
      } catch (const numerical_error&) {
        rejected_on_error = true;  // unattainable segment velocity
        alpha *= 0.5;
        continue;
      } catch (const std::domain_error&) {
        rejected_on_error = true;  // trial left the admissible orthant
        alpha *= 0.5;
        continue;
      }
      if (trial_action <= action - 1e-4 * alpha * gsq) {
        path = std::move(trial);
        action = trial_action;
        moved = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!moved) {
      if (rejected_on_error)
        throw numerical_error("minimize_action: persistent step rejection");
      return {path, action, iter, gnorm, false};
    }
  }
  return {path, action, iter, gnorm, false};
}

}  // namespace ldpkit
