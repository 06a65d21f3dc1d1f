#pragma once

#include <string>
#include <vector>

#include "ldpkit/linalg.hpp"

namespace ldpkit {

enum class RateKind { constant, mass_action };

// Rate law of one directed jump channel: either a bare constant k or a
// mass-action monomial k * prod_i z_i^order_i (0^0 := 1).
struct RateLaw {
  RateKind kind = RateKind::constant;
  double k = 0.0;
  std::vector<int> order;  // mass_action only, one exponent per species

  static RateLaw constant(double k) { return {RateKind::constant, k, {}}; }
  static RateLaw mass_action(double k, std::vector<int> order) {
    return {RateKind::mass_action, k, std::move(order)};
  }
};

// Paired jump channel: forward fires along +nu, backward along -nu.
struct JumpChannelPair {
  std::vector<int> nu;
  RateLaw forward;
  RateLaw backward;
};

// Affine drift A(z) = A0 + A1 z plus a constant symmetric PSD diffusion D.
struct DriftDiffusion {
  Vec A0;
  Matrix A1;
  Matrix D;

  bool has_drift() const;
  bool has_diffusion() const;
};

struct GeneratorSpec {
  int dimension = 0;
  std::string label;
  std::vector<JumpChannelPair> channels;
  DriftDiffusion drift_diffusion;

  bool pure_jump() const { return !drift_diffusion.has_drift() && !drift_diffusion.has_diffusion(); }
};

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

double evaluate_rate(const RateLaw& law, const Vec& z);

// d(rate)/dz_i, computed termwise so z_i = 0 with order_i >= 1 stays finite.
Vec rate_gradient(const RateLaw& law, const Vec& z);

Vec evaluate_drift(const DriftDiffusion& dd, const Vec& z);

ValidationReport validate_spec(const GeneratorSpec& spec);

// validate_spec or throw validation_error listing every violation.
void require_valid(const GeneratorSpec& spec);

// --- builders for common models -------------------------------------------

// dz = -a z dt + sqrt(2 eps D) dB
GeneratorSpec make_ou_spec(double a, double d);

// one species, birth at constant k_plus, death at k_minus * z
GeneratorSpec make_birth_death_spec(double k_plus, double k_minus);

// OU drift centered at `center` plus the birth-death channel pair
GeneratorSpec make_hybrid_spec(double a, double d, double k_plus, double k_minus,
                               double center = 0.0);

// --- config file round trip ------------------------------------------------

GeneratorSpec parse_spec_json(const std::string& text);
GeneratorSpec load_spec(const std::string& path);
std::string spec_to_json(const GeneratorSpec& spec);
void save_spec(const GeneratorSpec& spec, const std::string& path);

}  // namespace ldpkit
