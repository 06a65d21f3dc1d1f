#pragma once

#include <functional>

#include "ldpkit/model.hpp"
#include "ldpkit/trajectory.hpp"

namespace ldpkit {

struct OdeConfig {
  double t_end = 0.0;
  double dt = 0.0;
  long record_stride = 1;
};

// F(z) = A(z) + sum_pairs nu_l (R_l(z) - R_{-l}(z))
Vec vector_field(const GeneratorSpec& spec, const Vec& z);

// Classical RK4 with fixed step. On blow-up the trajectory is truncated at the
// last finite state.
Trajectory integrate_ode(const GeneratorSpec& spec, const Vec& z0, const OdeConfig& cfg);

// Same integrator for an arbitrary field (used for CIT extension fields).
Trajectory integrate_field(const std::function<Vec(const Vec&)>& field, const Vec& z0,
                           const OdeConfig& cfg);

// Newton iteration on F with finite-difference Jacobian.
Vec find_fixed_point(const GeneratorSpec& spec, Vec guess, double tol,
                     int max_iters = 100);

}  // namespace ldpkit
