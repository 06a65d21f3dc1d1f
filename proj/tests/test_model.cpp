#include <doctest.h>

#include <cmath>

#include "ldpkit/errors.hpp"
#include "ldpkit/model.hpp"
#include "ldpkit/rng.hpp"
#include "oracle_models.hpp"

using namespace ldpkit;

TEST_SUITE_BEGIN("model");

TEST_CASE("constant rate law ignores the state") {
  const RateLaw law = RateLaw::constant(2.0);
  CHECK(evaluate_rate(law, {3.0}) == 2.0);
  CHECK(evaluate_rate(law, {-5.0}) == 2.0);
}

TEST_CASE("mass-action monomials") {
  CHECK(evaluate_rate(RateLaw::mass_action(2.0, {1}), {3.0}) == 6.0);
  CHECK(evaluate_rate(RateLaw::mass_action(1.5, {2, 1}), {2.0, 3.0}) == 18.0);
  // 0^0 = 1: zero-order species do not gate the rate
  CHECK(evaluate_rate(RateLaw::mass_action(3.0, {0, 1}), {0.0, 2.0}) == 6.0);
  CHECK(evaluate_rate(RateLaw::mass_action(3.0, {1, 0}), {0.0, 2.0}) == 0.0);
}

TEST_CASE("mass-action rejects negative state with positive order") {
  CHECK_THROWS_AS(evaluate_rate(RateLaw::mass_action(1.0, {1}), {-0.1}),
                  std::domain_error);
  CHECK_NOTHROW(evaluate_rate(RateLaw::mass_action(1.0, {0}), {-0.1}));
}

TEST_CASE("mass-action gradient, including the z_i = 0 boundary") {
  const RateLaw law = RateLaw::mass_action(2.0, {2, 1});
  const Vec g = rate_gradient(law, {3.0, 5.0});
  CHECK(g[0] == doctest::Approx(2.0 * 2.0 * 3.0 * 5.0).epsilon(1e-15));
  CHECK(g[1] == doctest::Approx(2.0 * 9.0).epsilon(1e-15));

  // removable singularity: d/dz (k z) at z = 0 is k, not NaN
  const Vec g0 = rate_gradient(RateLaw::mass_action(1.5, {1}), {0.0});
  CHECK(g0[0] == 1.5);
}

TEST_CASE("affine drift evaluation") {
  DriftDiffusion dd;
  dd.A0 = {0.0};
  dd.A1 = Matrix(1, 1, -1.0);
  dd.D = Matrix(1, 1, 0.0);
  CHECK(evaluate_drift(dd, {2.0})[0] == -2.0);

  dd.A0 = {1.0};
  dd.A1 = Matrix(1, 1, 0.0);
  CHECK(evaluate_drift(dd, {5.0})[0] == 1.0);

  dd.A0 = {0.0};
  CHECK(evaluate_drift(dd, {7.0})[0] == 0.0);
}

TEST_CASE("validate_spec accepts the identity diffusion") {
  GeneratorSpec spec = oracles::ou();
  spec.drift_diffusion.D = Matrix::identity(1);
  CHECK(validate_spec(spec).ok());

  GeneratorSpec spec2;
  spec2.dimension = 2;
  spec2.drift_diffusion.A0 = {0.0, 0.0};
  spec2.drift_diffusion.A1 = Matrix(2, 2, 0.0);
  spec2.drift_diffusion.D = Matrix::identity(2);
  CHECK(validate_spec(spec2).ok());
}

TEST_CASE("validate_spec rejects an indefinite diffusion") {
  // [[1,2],[2,1]] has eigenvalues 3 and -1 (roots of (1-l)^2 - 4)
  GeneratorSpec spec;
  spec.dimension = 2;
  spec.drift_diffusion.A0 = {0.0, 0.0};
  spec.drift_diffusion.A1 = Matrix(2, 2, 0.0);
  Matrix d(2, 2, 2.0);
  d(0, 0) = 1.0;
  d(1, 1) = 1.0;
  spec.drift_diffusion.D = d;

  const auto rep = validate_spec(spec);
  CHECK(!rep.ok());

  const Vec eig = symmetric_eigenvalues(d);
  CHECK(eig[0] == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK(eig[1] == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("validate_spec rejects an all-zero jump direction") {
  GeneratorSpec spec = oracles::birth_death();
  spec.channels[0].nu = {0};
  CHECK(!validate_spec(spec).ok());
}

TEST_CASE("validate_spec rejects negative rate constants and asymmetric D") {
  GeneratorSpec spec = oracles::birth_death();
  spec.channels[0].forward.k = -1.0;
  CHECK(!validate_spec(spec).ok());

  GeneratorSpec spec2 = oracles::ou();
  Matrix d(1, 1, 1.0);
  spec2.drift_diffusion.D = d;
  spec2.dimension = 1;
  CHECK(validate_spec(spec2).ok());
}

TEST_CASE("rates stay finite and nonnegative on the positive orthant") {
  Rng rng(2024);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform() * 2.99);
    const GeneratorSpec spec = oracles::random_spec(rng, n);
    REQUIRE(validate_spec(spec).ok());
    for (int draw = 0; draw < 10; ++draw) {
      const Vec z = oracles::random_positive_state(rng, n);
      for (const auto& ch : spec.channels) {
        for (const RateLaw* law : {&ch.forward, &ch.backward}) {
          const double r = evaluate_rate(*law, z);
          CHECK(std::isfinite(r));
          CHECK(r >= 0.0);
        }
      }
    }
  }
}

TEST_CASE("JSON round trip reproduces evaluations bit-for-bit") {
  Rng rng(7);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 1 + static_cast<int>(rng.uniform() * 2.99);
    const GeneratorSpec spec = oracles::random_spec(rng, n);
    const GeneratorSpec back = parse_spec_json(spec_to_json(spec));

    for (int draw = 0; draw < 5; ++draw) {
      const Vec z = oracles::random_positive_state(rng, n);
      const Vec f1 = evaluate_drift(spec.drift_diffusion, z);
      const Vec f2 = evaluate_drift(back.drift_diffusion, z);
      CHECK(f1 == f2);
      REQUIRE(spec.channels.size() == back.channels.size());
      for (size_t c = 0; c < spec.channels.size(); ++c) {
        CHECK(evaluate_rate(spec.channels[c].forward, z) ==
              evaluate_rate(back.channels[c].forward, z));
        CHECK(evaluate_rate(spec.channels[c].backward, z) ==
              evaluate_rate(back.channels[c].backward, z));
      }
    }
  }
}

TEST_CASE("unknown config keys are hard errors") {
  CHECK_THROWS_AS(parse_spec_json(R"({"dimension": 1, "difusion": [[1]]})"),
                  validation_error);
  CHECK_THROWS_AS(
      parse_spec_json(R"({"dimension": 1, "drift": {"A0": [0], "A2": [[1]]}})"),
      validation_error);
  CHECK_THROWS_AS(
      parse_spec_json(
          R"({"dimension": 1, "channels": [{"nu": [1], "forward": {"kind": "constant", "k": 1, "extra": 2}, "backward": {"kind": "constant", "k": 1}}]})"),
      validation_error);
}

TEST_CASE("absent drift, diffusion and channels default to zero") {
  const GeneratorSpec spec = parse_spec_json(R"({"dimension": 2})");
  CHECK(spec.pure_jump());
  CHECK(spec.channels.empty());
  CHECK(evaluate_drift(spec.drift_diffusion, {1.0, 2.0}) == Vec{0.0, 0.0});
}

TEST_SUITE_END();
