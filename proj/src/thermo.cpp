#include "ldpkit/thermo.hpp"

#include <algorithm>
#include <cmath>

#include "ldpkit/determlimit.hpp"
#include "ldpkit/errors.hpp"

namespace ldpkit {

namespace {

constexpr double kPotentialTol = 1e-8;

double nu_dot(const std::vector<int>& nu, const Vec& y) {
  double s = 0.0;
  for (size_t i = 0; i < nu.size(); ++i) s += nu[i] * y[i];
  return s;
}

double guarded_exp(double x) {
  if (std::fabs(x) > 700.0)
    throw numerical_error("thermo: gradient out of exp range");
  return std::exp(x);
}

}  // namespace

EntropyBalanceTerms entropy_decomposition(const GeneratorSpec& spec,
                                          const ScalarField& candidate, const Vec& z) {
  const auto& dd = spec.drift_diffusion;
  const Vec grad = candidate.gradient(z);
  const bool mechanical = dd.has_drift() || dd.has_diffusion();

  EntropyBalanceTerms out;

  if (mechanical) {
    Matrix chol;
    if (!cholesky_pd(dd.D, chol))
      throw numerical_error(
          "entropy_decomposition: D must be positive definite when drift is present");
    const Vec a = evaluate_drift(dd, z);
    const Vec dinv_a = cholesky_solve(chol, a);
    out.entropy_production += dot(a, dinv_a);

    Vec shifted = a;  // A + D grad
    const Vec dgrad = matvec(dd.D, grad);
    for (size_t i = 0; i < shifted.size(); ++i) shifted[i] += dgrad[i];
    out.mechanical_drive = dot(shifted, cholesky_solve(chol, shifted));

    out.chemomechanical_exchange = dot(a, grad) + dot(grad, dgrad);
  }

  for (const auto& ch : spec.channels) {
    const double rf = evaluate_rate(ch.forward, z);
    const double rb = evaluate_rate(ch.backward, z);
    if (rf <= 0.0 || rb <= 0.0)
      throw numerical_error(
          "entropy_decomposition: vanishing directional rate, logarithm undefined at this z");
    const double net = rf - rb;
    const double log_ratio = std::log(rf / rb);
    const double ny = nu_dot(ch.nu, grad);
    out.entropy_production += net * log_ratio;
    out.chemical_drive += net * (log_ratio + ny);
  }

  const Vec f = vector_field(spec, z);
  out.entropy_change = -dot(f, grad);
  return out;
}

double PotentialResiduals::max() const {
  double m = mech;
  for (double c : chem_per_channel) m = std::max(m, std::fabs(c));
  return m;
}

PotentialResiduals check_potential_conditions(const GeneratorSpec& spec,
                                              const PotentialPair& pair, const Vec& z) {
  if (pair.U == nullptr || pair.G == nullptr)
    throw validation_error("check_potential_conditions: pair needs both U and G");
  const auto& dd = spec.drift_diffusion;

  PotentialResiduals res;
  const Vec a = evaluate_drift(dd, z);
  const Vec dgu = matvec(dd.D, pair.U->gradient(z));
  Vec mech(a.size());
  for (size_t i = 0; i < a.size(); ++i) mech[i] = a[i] + dgu[i];
  res.mech = norm_inf(mech);

  const Vec gg = pair.G->gradient(z);
  for (const auto& ch : spec.channels) {
    const double rf = evaluate_rate(ch.forward, z);
    const double rb = evaluate_rate(ch.backward, z);
    if (rf <= 0.0 || rb <= 0.0)
      throw numerical_error("check_potential_conditions: zero rate in logarithm");
    res.chem_per_channel.push_back(std::log(rf / rb) + nu_dot(ch.nu, gg));
  }
  return res;
}

Vec detailed_balance_field(const GeneratorSpec& spec, const PotentialPair& pair,
                           const Vec& z) {
  const PotentialResiduals res = check_potential_conditions(spec, pair, z);
  if (res.max() > kPotentialTol)
    throw numerical_error("detailed_balance_field: potential conditions fail at this state");

  const auto& dd = spec.drift_diffusion;
  Vec field = matvec(dd.D, pair.U->gradient(z));
  const Vec gg = pair.G->gradient(z);
  for (const auto& ch : spec.channels) {
    const double rf = evaluate_rate(ch.forward, z);
    const double rb = evaluate_rate(ch.backward, z);
    const double rhat = std::sqrt(rf * rb);
    const double arg = 0.5 * nu_dot(ch.nu, gg);
    const double flux = 2.0 * rhat * std::sinh(arg);
    for (size_t i = 0; i < field.size(); ++i) field[i] += ch.nu[i] * flux;
  }
  for (double& v : field) v = -v;
  return field;
}

SigmaDecomposition cit_sigma(const GeneratorSpec& spec, const ScalarField& candidate,
                             const Vec& z, const Vec& zdot) {
  const auto& dd = spec.drift_diffusion;
  const Vec grad = candidate.gradient(z);

  SigmaDecomposition out;
  for (const auto& ch : spec.channels) {
    const double ny = nu_dot(ch.nu, grad);
    const double rf = evaluate_rate(ch.forward, z);
    const double rb = evaluate_rate(ch.backward, z);
    out.sigma1 += rf * (guarded_exp(ny) - ny - 1.0);
    out.sigma1 += rb * (guarded_exp(-ny) + ny - 1.0);
  }

  // zdot - sum nu (R_l - R_{-l}) - A - D grad, dotted with grad
  Vec rem = zdot;
  const Vec a = evaluate_drift(dd, z);
  const Vec dgrad = matvec(dd.D, grad);
  for (size_t i = 0; i < rem.size(); ++i) rem[i] -= a[i] + dgrad[i];
  for (const auto& ch : spec.channels) {
    const double net = evaluate_rate(ch.forward, z) - evaluate_rate(ch.backward, z);
    for (size_t i = 0; i < rem.size(); ++i) rem[i] -= ch.nu[i] * net;
  }
  out.sigma2 = -dot(rem, grad);

  out.hje_residual = dot(zdot, grad) + out.sigma1 + out.sigma2;
  return out;
}

Vec cit_extension_field(const GeneratorSpec& spec, const ScalarField& candidate,
                        const Matrix& M, const Vec& z) {
  const int n = spec.dimension;
  if (M.rows() != n || M.cols() != n)
    throw validation_error("cit_extension_field: M must be dimension x dimension");
  if (max_asymmetry(M) > 1e-12)
    throw validation_error("cit_extension_field: M must be symmetric");
  const Vec eig = symmetric_eigenvalues(M);
  if (!eig.empty() && eig.front() < -1e-10)
    throw validation_error("cit_extension_field: M must be positive semidefinite");

  Vec field = vector_field(spec, z);
  const Vec grad = candidate.gradient(z);
  const auto& dd = spec.drift_diffusion;
  for (int i = 0; i < n; ++i) {
    double s = 0.0;
    for (int j = 0; j < n; ++j) s += (dd.D(j, i) - M(j, i)) * grad[j];
    field[i] += s;
  }
  return field;
}

}  // namespace ldpkit
