#include <doctest.h>

#include <cmath>

#include "ldpkit/determlimit.hpp"
#include "ldpkit/errors.hpp"
#include "ldpkit/ldp.hpp"
#include "oracle_models.hpp"

using namespace ldpkit;

TEST_SUITE_BEGIN("determlimit");

TEST_CASE("vector field of the OU model") {
  CHECK(vector_field(oracles::ou(), {2.0})[0] == -2.0);
}

TEST_CASE("vector field of birth-death: k+ - k- z") {
  CHECK(vector_field(oracles::birth_death(), {3.0})[0] == doctest::Approx(-1.0));
}

TEST_CASE("balanced channels with zero drift give a zero field") {
  GeneratorSpec spec;
  spec.dimension = 1;
  spec.drift_diffusion.A0 = {0.0};
  spec.drift_diffusion.A1 = Matrix(1, 1, 0.0);
  spec.drift_diffusion.D = Matrix(1, 1, 0.0);
  JumpChannelPair ch;
  ch.nu = {1};
  ch.forward = RateLaw::constant(1.7);
  ch.backward = RateLaw::constant(1.7);
  spec.channels.push_back(ch);
  CHECK(vector_field(spec, {5.0})[0] == 0.0);
}

TEST_CASE("RK4 hits the OU closed form") {
  const auto traj = integrate_ode(oracles::ou(), {1.0}, {1.0, 1e-3, 1});
  CHECK(traj.times.back() == doctest::Approx(1.0));
  CHECK(std::fabs(traj.states.back()[0] - std::exp(-1.0)) < 1e-6);
}

TEST_CASE("birth-death relaxes to k+/k-") {
  const auto traj = integrate_ode(oracles::birth_death(), {0.0}, {20.0, 1e-3, 100});
  CHECK(std::fabs(traj.states.back()[0] - 2.0) < 1e-8);
}

TEST_CASE("halving dt shrinks the RK4 error about 16x") {
  const double exact = std::exp(-1.0);
  const auto coarse = integrate_ode(oracles::ou(), {1.0}, {1.0, 0.1, 1});
  const auto fine = integrate_ode(oracles::ou(), {1.0}, {1.0, 0.05, 1});
  const double e1 = std::fabs(coarse.states.back()[0] - exact);
  const double e2 = std::fabs(fine.states.back()[0] - exact);
  const double ratio = e1 / e2;
  CHECK(ratio > 10.0);
  CHECK(ratio < 30.0);
}

TEST_CASE("blow-up truncates the trajectory instead of returning NaNs") {
  GeneratorSpec spec;
  spec.dimension = 1;
  spec.drift_diffusion.A0 = {0.0};
  spec.drift_diffusion.A1 = Matrix(1, 1, 60.0);  // z' = 60 z explodes fast
  spec.drift_diffusion.D = Matrix(1, 1, 0.0);
  const auto traj = integrate_ode(spec, {1.0}, {100.0, 0.1, 1});
  CHECK(traj.times.back() < 100.0);
  for (const auto& s : traj.states) CHECK(all_finite(s));
}

TEST_CASE("fixed point of the OU model is 0") {
  const Vec z = find_fixed_point(oracles::ou(), {1.5}, 1e-12);
  CHECK(std::fabs(z[0]) < 1e-12);
}

TEST_CASE("fixed point of birth-death is 2") {
  const Vec z = find_fixed_point(oracles::birth_death(), {0.5}, 1e-10);
  CHECK(std::fabs(z[0] - 2.0) < 1e-9);
}

TEST_CASE("a guess already at the fixed point returns immediately") {
  const Vec z = find_fixed_point(oracles::birth_death(), {2.0}, 1e-10);
  CHECK(z[0] == 2.0);
}

TEST_CASE("vector field equals the y = 0 slice of Hamilton's dz/dt") {
  Rng rng(99);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform() * 2.99);
    const GeneratorSpec spec = oracles::random_spec(rng, n);
    const Vec z = oracles::random_positive_state(rng, n);
    const Vec f = vector_field(spec, z);
    const PhaseRhs rhs = hamilton_rhs(spec, {z, Vec(n, 0.0)});
    for (int i = 0; i < n; ++i) {
      CHECK(std::fabs(f[i] - rhs.dz[i]) <= 1e-14 * std::max(1.0, std::fabs(f[i])));
    }
  }
}

TEST_SUITE_END();
