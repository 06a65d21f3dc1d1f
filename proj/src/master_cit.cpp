#include "ldpkit/master_cit.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "ldpkit/errors.hpp"

namespace ldpkit {

MasterValidation validate_master(const MasterEquationSpec& spec) {
  MasterValidation rep;
  const int n = spec.n_states;
  if (n < 2) rep.violations.push_back("need at least 2 states");
  if (spec.q.rows() != n || spec.q.cols() != n)
    rep.violations.push_back("rate matrix is not n_states x n_states");
  for (int i = 0; i < spec.q.rows(); ++i)
    for (int j = 0; j < spec.q.cols(); ++j)
      if (i != j && spec.q(i, j) < 0.0) {
        rep.violations.push_back("negative off-diagonal rate q(" + std::to_string(i) + "," +
                                 std::to_string(j) + ")");
      }
  return rep;
}

namespace {

void require_valid_master(const MasterEquationSpec& spec) {
  const MasterValidation rep = validate_master(spec);
  if (!rep.ok()) {
    std::string msg = "invalid master-equation spec:";
    for (const auto& v : rep.violations) msg += "\n  - " + v;
    throw validation_error(msg);
  }
}

void master_rhs(const MasterEquationSpec& spec, const Vec& p, Vec& out) {
  const int n = spec.n_states;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      s += p[j] * spec.q(j, i) - p[i] * spec.q(i, j);
    }
    out[i] = s;
  }
}

// Strongly connected components over edges with positive rate (Tarjan).
std::vector<std::vector<int>> communicating_classes(const MasterEquationSpec& spec) {
  const int n = spec.n_states;
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> classes;
  int counter = 0;

  std::function<void(int)> strongconnect = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (int w = 0; w < n; ++w) {
      if (w == v || spec.q(v, w) <= 0.0) continue;
      if (index[w] < 0) {
        strongconnect(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> cls;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        cls.push_back(w);
      } while (w != v);
      classes.push_back(std::move(cls));
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) strongconnect(v);
  return classes;
}

}  // namespace

MasterEquationSpec load_rate_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open rate matrix: " + path);
  std::vector<Vec> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Vec row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw validation_error("bad number '" + cell + "' in rate matrix " + path);
      }
    }
    rows.push_back(std::move(row));
  }
  MasterEquationSpec spec;
  spec.n_states = static_cast<int>(rows.size());
  spec.q = Matrix(spec.n_states, spec.n_states);
  for (int i = 0; i < spec.n_states; ++i) {
    if (static_cast<int>(rows[i].size()) != spec.n_states)
      throw validation_error("rate matrix is not square: " + path);
    for (int j = 0; j < spec.n_states; ++j) spec.q(i, j) = rows[i][j];
  }
  require_valid_master(spec);
  return spec;
}

MasterTrajectory evolve_master(const MasterEquationSpec& spec, const Vec& p0, double t_end,
                               double dt, long record_stride) {
  require_valid_master(spec);
  const int n = spec.n_states;
  if (static_cast<int>(p0.size()) != n)
    throw validation_error("evolve_master: p0 length mismatch");
  double sum = 0.0;
  for (double v : p0) {
    if (v < 0.0) throw validation_error("evolve_master: negative entry in p0");
    sum += v;
  }
  if (std::fabs(sum - 1.0) > 1e-12)
    throw validation_error("evolve_master: p0 does not sum to 1");
  if (dt <= 0.0 || t_end <= 0.0 || dt > t_end)
    throw validation_error("evolve_master: need 0 < dt <= t_end");

  const long n_steps = std::lround(t_end / dt) > 0 ? std::lround(t_end / dt) : 1;
  const double h = t_end / static_cast<double>(n_steps);

  MasterTrajectory traj;
  traj.times.push_back(0.0);
  traj.probs.push_back(p0);

  Vec p = p0, k1(n), k2(n), k3(n), k4(n), tmp(n);
  for (long s = 0; s < n_steps; ++s) {
    master_rhs(spec, p, k1);
    for (int i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k1[i];
    master_rhs(spec, tmp, k2);
    for (int i = 0; i < n; ++i) tmp[i] = p[i] + 0.5 * h * k2[i];
    master_rhs(spec, tmp, k3);
    for (int i = 0; i < n; ++i) tmp[i] = p[i] + h * k3[i];
    master_rhs(spec, tmp, k4);
    double total = 0.0;
    for (int i = 0; i < n; ++i) {
      p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
      if (p[i] < -1e-10)
        throw numerical_error("evolve_master: negative probability, reduce dt");
      total += p[i];
    }
    traj.max_conservation_drift =
        std::max(traj.max_conservation_drift, std::fabs(total - 1.0));
    const long step = s + 1;
    if (step % record_stride == 0 || step == n_steps) {
      traj.times.push_back(h * static_cast<double>(step));
      traj.probs.push_back(p);
    }
  }
  return traj;
}

Vec stationary_distribution(const MasterEquationSpec& spec) {
  require_valid_master(spec);
  const int n = spec.n_states;

  const auto classes = communicating_classes(spec);
  if (classes.size() > 1) {
    std::string msg = "stationary_distribution: chain is reducible; communicating classes:";
    for (const auto& cls : classes) {
      msg += " {";
      for (size_t k = 0; k < cls.size(); ++k)
        msg += (k ? "," : "") + std::to_string(cls[k]);
      msg += "}";
    }
    throw validation_error(msg);
  }

  // rows of the linear system: (Q^T pi)_i = 0, last row replaced by sum = 1
  Matrix sys(n, n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      sys(i, j) += spec.q(j, i);   // inflow j -> i
      sys(i, i) -= spec.q(i, j);   // outflow i -> j
    }
  }
  Vec rhs(n, 0.0);
  for (int j = 0; j < n; ++j) sys(n - 1, j) = 1.0;
  rhs[n - 1] = 1.0;

  Vec pi = solve_linear(std::move(sys), std::move(rhs));
  for (double v : pi)
    if (!(v > -1e-12))
      throw numerical_error("stationary_distribution: negative stationary mass");
  return pi;
}

namespace {

EntropyLedger balance_with_reference(const MasterEquationSpec& spec, const Vec& p,
                                     const Vec* pi) {
  const int n = spec.n_states;
  if (static_cast<int>(p.size()) != n)
    throw validation_error("entropy balance: p length mismatch");
  for (double v : p)
    if (v <= 0.0)
      throw std::domain_error("entropy balance requires strictly positive probabilities");

  auto tilted = [&](int i) { return pi ? p[i] / (*pi)[i] : p[i]; };

  EntropyLedger led;
  led.production.assign(n, 0.0);
  led.exchange.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const double flux = p[i] * spec.q(i, j) - p[j] * spec.q(j, i);
      if (flux == 0.0) continue;
      led.production[i] += 0.5 * flux * std::log(tilted(i) / tilted(j));
      led.exchange[i] += 0.5 * flux * (std::log(tilted(i) * tilted(j)) + 2.0);
    }
    led.total_production += led.production[i];
    led.total_exchange += led.exchange[i];
  }
  led.total_rate = led.total_production + led.total_exchange;
  return led;
}

}  // namespace

EntropyLedger entropy_balance(const MasterEquationSpec& spec, const Vec& p) {
  require_valid_master(spec);
  return balance_with_reference(spec, p, nullptr);
}

EntropyLedger free_energy_balance(const MasterEquationSpec& spec, const Vec& p,
                                  const Vec& pi) {
  require_valid_master(spec);
  for (double v : pi)
    if (v <= 0.0)
      throw std::domain_error("free_energy_balance: pi must be strictly positive");
  return balance_with_reference(spec, p, &pi);
}

EntropyLedger free_energy_balance(const MasterEquationSpec& spec, const Vec& p) {
  return free_energy_balance(spec, p, stationary_distribution(spec));
}

AffinityMatrices affinity_coefficients(const MasterEquationSpec& spec, const Vec& p) {
  require_valid_master(spec);
  const int n = spec.n_states;
  for (double v : p)
    if (v <= 0.0)
      throw std::domain_error("affinity_coefficients: p must be strictly positive");
  const Vec pi = stationary_distribution(spec);

  AffinityMatrices out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  out.M = Matrix(n, n, nan);
  out.Mtilde = Matrix(n, n, nan);
  out.defined.assign(static_cast<size_t>(n) * n, 0);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      const bool edge = spec.q(i, j) > 0.0 || spec.q(j, i) > 0.0;
      const double flux = p[i] * spec.q(i, j) - p[j] * spec.q(j, i);
      if (!edge || flux == 0.0) continue;  // undefined: no edge or zero net flux
      out.M(i, j) = (std::log(p[i]) - std::log(p[j])) / flux;
      out.Mtilde(i, j) =
          (std::log(p[i] / pi[i]) - std::log(p[j] / pi[j])) / flux;
      out.defined[static_cast<size_t>(i) * n + j] = 1;
    }
  }
  return out;
}

}  // namespace ldpkit
