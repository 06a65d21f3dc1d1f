#include <doctest.h>

#include <cmath>

#include "ldpkit/errors.hpp"
#include "ldpkit/master_cit.hpp"
#include "ldpkit/rng.hpp"

using namespace ldpkit;

namespace {

MasterEquationSpec two_state() {
  MasterEquationSpec spec;
  spec.n_states = 2;
  spec.q = Matrix(2, 2, 0.0);
  spec.q(0, 1) = 1.0;  // q12
  spec.q(1, 0) = 2.0;  // q21
  return spec;
}

// clockwise cycle, uniform stationary law but no detailed balance
MasterEquationSpec three_cycle() {
  MasterEquationSpec spec;
  spec.n_states = 3;
  spec.q = Matrix(3, 3, 0.0);
  spec.q(0, 1) = 1.0;
  spec.q(1, 2) = 1.0;
  spec.q(2, 0) = 1.0;
  return spec;
}

// chain 0-1-2 (a tree): detailed balanced by construction
MasterEquationSpec detailed_balanced_chain() {
  MasterEquationSpec spec;
  spec.n_states = 3;
  spec.q = Matrix(3, 3, 0.0);
  spec.q(0, 1) = 1.0;
  spec.q(1, 0) = 2.0;
  spec.q(1, 2) = 1.0;
  spec.q(2, 1) = 1.0;
  return spec;
}

Vec random_distribution(Rng& rng, int n) {
  Vec p(n);
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    p[i] = 0.05 + rng.uniform();
    s += p[i];
  }
  for (int i = 0; i < n; ++i) p[i] /= s;
  return p;
}

}  // namespace

TEST_SUITE_BEGIN("master");

TEST_CASE("zero rates leave the distribution constant") {
  MasterEquationSpec spec;
  spec.n_states = 2;
  spec.q = Matrix(2, 2, 0.0);
  const auto traj = evolve_master(spec, {0.3, 0.7}, 1.0, 0.01);
  CHECK(traj.probs.back() == Vec{0.3, 0.7});
}

TEST_CASE("two-state relaxation follows the closed form") {
  const auto traj = evolve_master(two_state(), {1.0, 0.0}, 3.0, 1e-3, 100);
  for (size_t k = 0; k < traj.times.size(); ++k) {
    const double t = traj.times[k];
    const double expected = 2.0 / 3.0 + std::exp(-3.0 * t) / 3.0;
    CHECK(std::fabs(traj.probs[k][0] - expected) < 1e-9);
  }
  CHECK(traj.max_conservation_drift <= 1e-12);
}

TEST_CASE("probability conservation along a cycle chain") {
  const auto traj = evolve_master(three_cycle(), {0.7, 0.2, 0.1}, 10.0, 1e-3, 100);
  for (const auto& p : traj.probs) {
    double s = 0.0;
    for (double v : p) s += v;
    CHECK(std::fabs(s - 1.0) <= 1e-12);
  }
}

TEST_CASE("evolve_master validates p0") {
  CHECK_THROWS_AS(evolve_master(two_state(), {0.5, 0.4}, 1.0, 0.01), validation_error);
  CHECK_THROWS_AS(evolve_master(two_state(), {1.2, -0.2}, 1.0, 0.01), validation_error);
}

TEST_CASE("stationary distribution of the two-state chain is (2/3, 1/3)") {
  const Vec pi = stationary_distribution(two_state());
  CHECK(std::fabs(pi[0] - 2.0 / 3.0) <= 1e-12);
  CHECK(std::fabs(pi[1] - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("symmetric rates give the uniform distribution") {
  MasterEquationSpec spec;
  spec.n_states = 4;
  spec.q = Matrix(4, 4, 0.0);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      if (i != j) spec.q(i, j) = 0.7;
  const Vec pi = stationary_distribution(spec);
  for (double v : pi) CHECK(std::fabs(v - 0.25) <= 1e-12);
}

TEST_CASE("the 3-cycle has uniform pi but no detailed balance") {
  const auto spec = three_cycle();
  const Vec pi = stationary_distribution(spec);
  for (double v : pi) CHECK(std::fabs(v - 1.0 / 3.0) <= 1e-12);
  CHECK(pi[0] * spec.q(0, 1) != doctest::Approx(pi[1] * spec.q(1, 0)).epsilon(1e-12));
}

TEST_CASE("reducible chains are rejected with their classes named") {
  MasterEquationSpec spec;
  spec.n_states = 3;
  spec.q = Matrix(3, 3, 0.0);
  spec.q(0, 1) = 1.0;
  spec.q(1, 0) = 1.0;  // state 2 isolated
  try {
    stationary_distribution(spec);
    FAIL("expected validation_error");
  } catch (const validation_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("reducible") != std::string::npos);
    CHECK(msg.find("{2}") != std::string::npos);
  }
}

TEST_CASE("entropy ledger vanishes at the stationary law of a balanced chain") {
  const auto spec = detailed_balanced_chain();
  const Vec pi = stationary_distribution(spec);
  const EntropyLedger led = entropy_balance(spec, pi);
  for (size_t i = 0; i < led.production.size(); ++i) {
    CHECK(std::fabs(led.production[i]) <= 1e-12);
    CHECK(std::fabs(led.exchange[i]) <= 1e-12);
  }
}

TEST_CASE("total entropy rate matches a finite-difference oracle") {
  const auto spec = two_state();

  // independent route: central difference of sum_i -p_i ln p_i along the
  // evolution, compared against the ledger at the midpoint state
  const double h = 1e-5;
  const auto traj = evolve_master(spec, {0.9, 0.1}, 2.0 * h, h);
  REQUIRE(traj.probs.size() == 3);
  auto entropy_of = [](const Vec& q) {
    double s = 0.0;
    for (double v : q) s += -v * std::log(v);
    return s;
  };
  const double fd =
      (entropy_of(traj.probs.back()) - entropy_of(traj.probs.front())) / (2.0 * h);
  const EntropyLedger led = entropy_balance(spec, traj.probs[1]);
  CHECK(std::fabs(led.total_rate - fd) < 1e-6);
}

TEST_CASE("production half is nonnegative for symmetric rates") {
  MasterEquationSpec spec;
  spec.n_states = 3;
  spec.q = Matrix(3, 3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) spec.q(i, j) = 0.5 + 0.1 * (i + j);
  // (x - y) ln(x/y) >= 0 termwise when q_ij = q_ji
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i < j) spec.q(j, i) = spec.q(i, j);

  Rng rng(41);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec p = random_distribution(rng, 3);
    const EntropyLedger led = entropy_balance(spec, p);
    CHECK(led.total_production >= -1e-14);
  }
}

TEST_CASE("free-energy ledger vanishes at pi even without detailed balance") {
  const auto spec = three_cycle();
  const Vec pi = stationary_distribution(spec);
  const EntropyLedger led = free_energy_balance(spec, pi, pi);
  for (size_t i = 0; i < led.production.size(); ++i) {
    CHECK(std::fabs(led.production[i]) <= 1e-12);
    CHECK(std::fabs(led.exchange[i]) <= 1e-12);
  }
}

TEST_CASE("relative entropy decays along the 3-cycle (H-theorem)") {
  const auto spec = three_cycle();
  const Vec pi = stationary_distribution(spec);
  const auto traj = evolve_master(spec, {0.7, 0.2, 0.1}, 10.0, 1e-3, 50);
  double prev = 1e300;
  for (const auto& p : traj.probs) {
    double f = 0.0;
    for (int i = 0; i < 3; ++i) f += p[i] * std::log(p[i] / pi[i]);
    CHECK(f <= prev + 1e-10);
    prev = f;
  }
}

TEST_CASE("free-energy production half is nonnegative under detailed balance") {
  const auto spec = detailed_balanced_chain();
  const Vec pi = stationary_distribution(spec);
  Rng rng(42);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec p = random_distribution(rng, 3);
    const EntropyLedger led = free_energy_balance(spec, p, pi);
    CHECK(led.total_production >= -1e-14);
  }
}

TEST_CASE("affinity coefficients: symmetric rates make every defined M positive") {
  MasterEquationSpec spec;
  spec.n_states = 3;
  spec.q = Matrix(3, 3, 0.0);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (i != j) spec.q(i, j) = 1.3;
  Rng rng(43);
  for (int rep = 0; rep < 200; ++rep) {
    const Vec p = random_distribution(rng, 3);
    const auto aff = affinity_coefficients(spec, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j && aff.is_defined(i, j)) CHECK(aff.M(i, j) > 0.0);
  }
}

TEST_CASE("tilted affinity: positive iff detailed balance") {
  Rng rng(44);
  const auto db = detailed_balanced_chain();
  for (int rep = 0; rep < 1000; ++rep) {
    const Vec p = random_distribution(rng, 3);
    const auto aff = affinity_coefficients(db, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (i != j && aff.is_defined(i, j)) CHECK(aff.Mtilde(i, j) > 0.0);
  }

  const auto cyc = three_cycle();
  bool found_violation = false;
  for (int rep = 0; rep < 1000 && !found_violation; ++rep) {
    const Vec p = random_distribution(rng, 3);
    const auto aff = affinity_coefficients(cyc, p);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        if (i == j) continue;
        const bool edge = cyc.q(i, j) > 0.0 || cyc.q(j, i) > 0.0;
        if (edge && (!aff.is_defined(i, j) || aff.Mtilde(i, j) <= 0.0))
          found_violation = true;
      }
  }
  CHECK(found_violation);
}

TEST_CASE("balances require strictly positive p") {
  CHECK_THROWS_AS(entropy_balance(two_state(), {1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(affinity_coefficients(two_state(), {1.0, 0.0}), std::domain_error);
}

TEST_SUITE_END();
