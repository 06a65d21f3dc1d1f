#pragma once

#include <vector>

#include "ldpkit/model.hpp"

namespace ldpkit {

struct PhasePoint {
  Vec z;
  Vec y;
};

// Path on a uniform time grid 0 = t_0 < ... < t_N = T, endpoints pinned
// during minimization.
struct DiscretePath {
  std::vector<double> times;
  std::vector<Vec> states;

  int segments() const { return static_cast<int>(times.size()) - 1; }
  double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }
};

DiscretePath linear_path(const Vec& z_start, const Vec& z_end, double T, int N);

// Fluctuation Hamiltonian
//   H(z,y) = A(z).y + y^T D y + sum_pairs [R_l(z)(e^{nu.y}-1) + R_{-l}(z)(e^{-nu.y}-1)]
// Throws numerical_error when |nu.y| exceeds the exp range.
double hamiltonian(const GeneratorSpec& spec, const Vec& z, const Vec& y);

struct PhaseRhs {
  Vec dz;
  Vec dy;
};

PhaseRhs hamilton_rhs(const GeneratorSpec& spec, const PhasePoint& p);

struct PhaseFlow {
  std::vector<double> times;
  std::vector<PhasePoint> points;
  double h_initial = 0.0;
  double max_h_drift = 0.0;
  bool aborted = false;  // blow-up or momentum out of range
};

PhaseFlow integrate_hamilton(const GeneratorSpec& spec, const PhasePoint& p0, double T,
                             double dt, long record_stride = 1);

// Solve zdot = dH/dy(z, y) for y. Newton from y = 0, strictly convex in y for
// nondegenerate specs. Throws numerical_error when zdot is unattainable.
Vec legendre_momentum(const GeneratorSpec& spec, const Vec& z, const Vec& zdot,
                      double tol = 1e-10, int max_iters = 50);

// L(z, zdot) = y.zdot - H(z,y) at y = legendre_momentum(z, zdot).
double lagrangian(const GeneratorSpec& spec, const Vec& z, const Vec& zdot);

// Midpoint-rule action sum_k L((z_k+z_{k+1})/2, (z_{k+1}-z_k)/dt) dt.
double path_action(const GeneratorSpec& spec, const DiscretePath& path);

struct MinimizeOptions {
  double gtol = 1e-4;
  int max_iters = 50000;
  double fd_step = 1e-6;
};

struct MinimizeResult {
  DiscretePath path;
  double action = 0.0;
  int iters = 0;
  double gnorm = 0.0;
  bool converged = false;
};

// Gradient descent with backtracking line search on the interior nodes;
// gradient by central finite differences of the two segment contributions
// touching each node.
MinimizeResult minimize_action(const GeneratorSpec& spec, const Vec& z_start,
                               const Vec& z_end, double T, int N,
                               const MinimizeOptions& opts = {});

}  // namespace ldpkit
