#pragma once

#include <functional>
#include <vector>

#include "ldpkit/model.hpp"
#include "ldpkit/trajectory.hpp"

namespace ldpkit {

// Scalar potential with gradient, the shared interface of rate-function
// candidates and of the U/G potentials in the thermo module.
class ScalarField {
 public:
  virtual ~ScalarField() = default;
  virtual double value(const Vec& z) const = 0;
  virtual Vec gradient(const Vec& z) const = 0;
};

// phi(z) = a |z|^2 / (2 D)
class OuQuadratic final : public ScalarField {
 public:
  OuQuadratic(double a, double d);
  double value(const Vec& z) const override;
  Vec gradient(const Vec& z) const override;

 private:
  double a_, d_;
};

// U(z) = scale |z - center|^2 / 2, the mechanical potential family.
class QuadraticPotential final : public ScalarField {
 public:
  QuadraticPotential(Vec center, double scale);
  double value(const Vec& z) const override;
  Vec gradient(const Vec& z) const override;

 private:
  Vec center_;
  double scale_;
};

// phi(z) = sum_i z_i ln(z_i / zss_i) - z_i + zss_i, with 0 ln 0 := 0.
class RelativeEntropy final : public ScalarField {
 public:
  explicit RelativeEntropy(Vec z_ss);
  double value(const Vec& z) const override;
  Vec gradient(const Vec& z) const override;
  const Vec& z_ss() const { return z_ss_; }

 private:
  Vec z_ss_;
};

// 1-D candidate tabulated on a uniform grid; linear interpolation for the
// value, central differences for the gradient. Verification-only.
class Tabulated final : public ScalarField {
 public:
  Tabulated(double lo, double hi, Vec values);
  double value(const Vec& z) const override;
  Vec gradient(const Vec& z) const override;

 private:
  double lo_, hi_, dx_;
  Vec values_;
};

// Arbitrary callable pair, handy for negative controls in tests.
class FunctionField final : public ScalarField {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;
  FunctionField(ValueFn v, GradFn g) : v_(std::move(v)), g_(std::move(g)) {}
  double value(const Vec& z) const override { return v_(z); }
  Vec gradient(const Vec& z) const override { return g_(z); }

 private:
  ValueFn v_;
  GradFn g_;
};

// Transient OU rate function a z^2 / (2 D (1 - e^{-2 a t})) with analytic
// space and time derivatives; defined for t > 0.
struct TimeDependentOuCandidate {
  double a = 1.0;
  double d = 1.0;

  double value(double z, double t) const;
  double gradient(double z, double t) const;
  double time_derivative(double z, double t) const;
};

// a z^2 / (2 D (1 - e^{-2 a t})); stationary limit a z^2 / (2 D).
double ou_rate_function(double a, double d, double z, double t);
double ou_rate_function_stationary(double a, double d, double z);

double crn_relative_entropy(const Vec& z, const Vec& z_ss);

// A(z).grad + grad^T D grad + sum_pairs [R_l(e^{nu.grad}-1) + R_{-l}(e^{-nu.grad}-1)]
// evaluated at grad = candidate gradient; equals hamiltonian(spec, z, grad).
double stationary_hje_residual(const GeneratorSpec& spec, const ScalarField& candidate,
                               const Vec& z);

// d_t phi + A d_z phi + (d_z phi) D (d_z phi) for the transient OU candidate,
// all derivatives analytic.
double transient_hje_residual(double a, double d, double z, double t);

struct LyapunovScan {
  std::vector<double> times;
  std::vector<double> phi;
  std::vector<double> dphi_dt;
};

// dphi/dt = F(z(t)).grad phi(z(t)) along a deterministic trajectory. An
// alternative field (e.g. a CIT extension) may replace F.
LyapunovScan lyapunov_scan(const GeneratorSpec& spec, const ScalarField& candidate,
                           const Trajectory& traj);
LyapunovScan lyapunov_scan_field(const std::function<Vec(const Vec&)>& field,
                                 const ScalarField& candidate, const Trajectory& traj);

}  // namespace ldpkit
