#include "ldpkit/quasipotential.hpp"

#include <cmath>

#include "ldpkit/determlimit.hpp"
#include "ldpkit/errors.hpp"

namespace ldpkit {

OuQuadratic::OuQuadratic(double a, double d) : a_(a), d_(d) {
  if (a <= 0.0 || d <= 0.0) throw validation_error("OuQuadratic: need a > 0 and D > 0");
}

double OuQuadratic::value(const Vec& z) const {
  double s = 0.0;
  for (double x : z) s += x * x;
  return a_ * s / (2.0 * d_);
}

Vec OuQuadratic::gradient(const Vec& z) const {
  Vec g(z.size());
  for (size_t i = 0; i < z.size(); ++i) g[i] = a_ * z[i] / d_;
  return g;
}

QuadraticPotential::QuadraticPotential(Vec center, double scale)
    : center_(std::move(center)), scale_(scale) {}

double QuadraticPotential::value(const Vec& z) const {
  double s = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    const double d = z[i] - center_[i];
    s += d * d;
  }
  return 0.5 * scale_ * s;
}

Vec QuadraticPotential::gradient(const Vec& z) const {
  Vec g(z.size());
  for (size_t i = 0; i < z.size(); ++i) g[i] = scale_ * (z[i] - center_[i]);
  return g;
}

RelativeEntropy::RelativeEntropy(Vec z_ss) : z_ss_(std::move(z_ss)) {
  for (double v : z_ss_)
    if (v <= 0.0) throw validation_error("RelativeEntropy: z_ss entries must be > 0");
}

double RelativeEntropy::value(const Vec& z) const {
  double s = 0.0;
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 0.0) throw std::domain_error("RelativeEntropy: negative concentration");
    if (z[i] > 0.0) s += z[i] * std::log(z[i] / z_ss_[i]);
    s += z_ss_[i] - z[i];  // 0 ln 0 := 0
  }
  return s;
}

Vec RelativeEntropy::gradient(const Vec& z) const {
  Vec g(z.size());
  for (size_t i = 0; i < z.size(); ++i) {
    if (z[i] <= 0.0)
      throw std::domain_error("RelativeEntropy gradient undefined at the boundary z_i <= 0");
    g[i] = std::log(z[i] / z_ss_[i]);
  }
  return g;
}

Tabulated::Tabulated(double lo, double hi, Vec values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  if (values_.size() < 2 || hi_ <= lo_)
    throw validation_error("Tabulated: need at least two grid values and hi > lo");
  dx_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
}

double Tabulated::value(const Vec& z) const {
  const double x = z.at(0);
  if (x < lo_ || x > hi_) throw std::domain_error("Tabulated: point outside grid");
  const auto m = static_cast<size_t>(values_.size() - 2);
  size_t i = static_cast<size_t>((x - lo_) / dx_);
  if (i > m) i = m;
  const double w = (x - (lo_ + i * dx_)) / dx_;
  return (1.0 - w) * values_[i] + w * values_[i + 1];
}

Vec Tabulated::gradient(const Vec& z) const {
  const double x = z.at(0);
  if (x < lo_ || x > hi_) throw std::domain_error("Tabulated: point outside grid");
  size_t i = static_cast<size_t>((x - lo_) / dx_ + 0.5);
  if (i == 0) i = 1;
  if (i + 1 >= values_.size()) i = values_.size() - 2;
  return {(values_[i + 1] - values_[i - 1]) / (2.0 * dx_)};
}

double TimeDependentOuCandidate::value(double z, double t) const {
  if (t <= 0.0) throw validation_error("TimeDependentOuCandidate: need t > 0");
  return a * z * z / (2.0 * d * (1.0 - std::exp(-2.0 * a * t)));
}

double TimeDependentOuCandidate::gradient(double z, double t) const {
  if (t <= 0.0) throw validation_error("TimeDependentOuCandidate: need t > 0");
  return a * z / (d * (1.0 - std::exp(-2.0 * a * t)));
}

double TimeDependentOuCandidate::time_derivative(double z, double t) const {
  if (t <= 0.0) throw validation_error("TimeDependentOuCandidate: need t > 0");
  const double s = 1.0 - std::exp(-2.0 * a * t);
  return -a * a * z * z * std::exp(-2.0 * a * t) / (d * s * s);
}

double ou_rate_function(double a, double d, double z, double t) {
  if (a <= 0.0 || d <= 0.0) throw validation_error("ou_rate_function: need a > 0, D > 0");
  return TimeDependentOuCandidate{a, d}.value(z, t);
}

double ou_rate_function_stationary(double a, double d, double z) {
  if (a <= 0.0 || d <= 0.0) throw validation_error("ou_rate_function: need a > 0, D > 0");
  return a * z * z / (2.0 * d);
}

double crn_relative_entropy(const Vec& z, const Vec& z_ss) {
  if (z.size() != z_ss.size())
    throw validation_error("crn_relative_entropy: dimension mismatch");
  return RelativeEntropy(z_ss).value(z);
}

double stationary_hje_residual(const GeneratorSpec& spec, const ScalarField& candidate,
                               const Vec& z) {
  const Vec grad = candidate.gradient(z);
  const auto& dd = spec.drift_diffusion;

  double res = dot(evaluate_drift(dd, z), grad) + quadratic_form(dd.D, grad);
  for (const auto& ch : spec.channels) {
    double ny = 0.0;
    for (size_t i = 0; i < ch.nu.size(); ++i) ny += ch.nu[i] * grad[i];
    if (std::fabs(ny) > 700.0)
      throw numerical_error("stationary_hje_residual: gradient out of exp range");
    res += evaluate_rate(ch.forward, z) * (std::exp(ny) - 1.0);
    res += evaluate_rate(ch.backward, z) * (std::exp(-ny) - 1.0);
  }
  return res;
}

double transient_hje_residual(double a, double d, double z, double t) {
  const TimeDependentOuCandidate cand{a, d};
  const double grad = cand.gradient(z, t);
  const double drift_term = -a * z * grad;
  const double diff_term = d * grad * grad;
  return cand.time_derivative(z, t) + drift_term + diff_term;
}

LyapunovScan lyapunov_scan_field(const std::function<Vec(const Vec&)>& field,
                                 const ScalarField& candidate, const Trajectory& traj) {
  LyapunovScan scan;
  scan.times = traj.times;
  scan.phi.reserve(traj.times.size());
  scan.dphi_dt.reserve(traj.times.size());
  for (const Vec& z : traj.states) {
    scan.phi.push_back(candidate.value(z));
    scan.dphi_dt.push_back(dot(field(z), candidate.gradient(z)));
  }
  return scan;
}

LyapunovScan lyapunov_scan(const GeneratorSpec& spec, const ScalarField& candidate,
                           const Trajectory& traj) {
  return lyapunov_scan_field([&spec](const Vec& z) { return vector_field(spec, z); },
                             candidate, traj);
}

}  // namespace ldpkit
