#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ldpkit/linalg.hpp"

namespace ldpkit {

// Finite-state master equation dp_i/dt = sum_j (p_j q_ji - p_i q_ij).
struct MasterEquationSpec {
  int n_states = 0;
  Matrix q;  // off-diagonal rates >= 0, diagonal ignored
};

struct MasterValidation {
  std::vector<std::string> violations;
  std::vector<std::string> warnings;
  bool ok() const { return violations.empty(); }
};

MasterValidation validate_master(const MasterEquationSpec& spec);

MasterEquationSpec load_rate_matrix_csv(const std::string& path);

struct MasterTrajectory {
  std::vector<double> times;
  std::vector<Vec> probs;
  double max_conservation_drift = 0.0;
};

// RK4 with fixed step; conservation drift is reported, never rescaled away.
// Throws numerical_error if a component falls below -1e-10.
MasterTrajectory evolve_master(const MasterEquationSpec& spec, const Vec& p0, double t_end,
                               double dt, long record_stride = 1);

// Solves pi Q = 0, sum pi = 1 by dense elimination. Throws validation_error
// naming the communicating classes when the chain is reducible.
Vec stationary_distribution(const MasterEquationSpec& spec);

struct EntropyLedger {
  Vec production;  // per state
  Vec exchange;    // per state
  double total_production = 0.0;
  double total_exchange = 0.0;
  double total_rate = 0.0;  // production + exchange
};

// Local entropy s_i = -p_i ln p_i split into force-times-flux production and
// exchange halves. Requires strictly positive p.
EntropyLedger entropy_balance(const MasterEquationSpec& spec, const Vec& p);

// Same split for the free energy s~_i = -p_i ln(p_i/pi_i).
EntropyLedger free_energy_balance(const MasterEquationSpec& spec, const Vec& p);
EntropyLedger free_energy_balance(const MasterEquationSpec& spec, const Vec& p,
                                  const Vec& pi);

struct AffinityMatrices {
  Matrix M;       // (ln p_i - ln p_j) / (p_i q_ij - p_j q_ji)
  Matrix Mtilde;  // tilted by pi
  // 1 where the coefficient is defined (nonzero net flux over an existing edge)
  std::vector<std::uint8_t> defined;

  bool is_defined(int i, int j) const {
    return defined[static_cast<size_t>(i) * M.cols() + j] != 0;
  }
};

AffinityMatrices affinity_coefficients(const MasterEquationSpec& spec, const Vec& p);

}  // namespace ldpkit
