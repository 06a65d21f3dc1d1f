#pragma once

#include "ldpkit/model.hpp"
#include "ldpkit/quasipotential.hpp"

namespace ldpkit {

// Four-term split of the entropy change rate -d(phi)/dt along the
// deterministic flow:
//   change = production - mechanical_drive - chemical_drive + exchange.
struct EntropyBalanceTerms {
  double entropy_change = 0.0;
  double entropy_production = 0.0;
  double mechanical_drive = 0.0;
  double chemical_drive = 0.0;
  double chemomechanical_exchange = 0.0;

  double identity_residual() const {
    return entropy_change - (entropy_production - mechanical_drive - chemical_drive +
                             chemomechanical_exchange);
  }
};

// Throws numerical_error when D is singular with drift present, or when a
// directional rate vanishes where its logarithm is required.
EntropyBalanceTerms entropy_decomposition(const GeneratorSpec& spec,
                                          const ScalarField& candidate, const Vec& z);

struct PotentialPair {
  const ScalarField* U = nullptr;  // mechanical potential
  const ScalarField* G = nullptr;  // chemical Gibbs potential
};

struct PotentialResiduals {
  double mech = 0.0;
  Vec chem_per_channel;

  double max() const;
};

// mech = |A(z) + D grad U(z)|_inf; chem_l = |ln(R_l/R_{-l}) + nu_l . grad G|.
PotentialResiduals check_potential_conditions(const GeneratorSpec& spec,
                                              const PotentialPair& pair, const Vec& z);

// -[D grad U + sum_pairs 2 nu_l Rhat_l sinh(nu_l . grad G / 2)],
// Rhat = sqrt(R_l R_{-l}). Refuses (numerical_error) when the potential
// conditions fail at z beyond 1e-8.
Vec detailed_balance_field(const GeneratorSpec& spec, const PotentialPair& pair,
                           const Vec& z);

struct SigmaDecomposition {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  // zdot.grad + sigma1 + sigma2 == H(z, grad): zero exactly when the
  // candidate solves the stationary HJE.
  double hje_residual = 0.0;
};

SigmaDecomposition cit_sigma(const GeneratorSpec& spec, const ScalarField& candidate,
                             const Vec& z, const Vec& zdot);

// F(z) + (D - M)^T grad phi(z); M symmetric PSD, M = D recovers F.
Vec cit_extension_field(const GeneratorSpec& spec, const ScalarField& candidate,
                        const Matrix& M, const Vec& z);

}  // namespace ldpkit
