#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ldpkit/ldp.hpp"
#include "ldpkit/master_cit.hpp"
#include "ldpkit/quasipotential.hpp"
#include "ldpkit/simulate.hpp"
#include "ldpkit/thermo.hpp"
#include "ldpkit/trajectory.hpp"

namespace ldpkit {

// All tables are CSV with a header row; doubles are written round-trip exact.
std::string format_double(double x);

void write_trajectory_csv(const std::string& path, const Trajectory& traj);
void write_histogram_csv(const std::string& path, const EnsembleHistogram& hist);
void write_rate_function_csv(const std::string& path,
                             const std::vector<RateFunctionPoint>& points);
void write_residual_scan_csv(const std::string& path, const std::vector<Vec>& zs,
                             const Vec& residuals,
                             const std::vector<std::string>& columns = {});
void write_lyapunov_csv(const std::string& path, const LyapunovScan& scan);
void write_phase_flow_csv(const std::string& path, const PhaseFlow& flow);
void write_path_csv(const std::string& path, const DiscretePath& p);

struct LedgerRow {
  double t = 0.0;
  EntropyBalanceTerms terms;
  double sigma1 = 0.0;
  double sigma2 = 0.0;
};
void write_entropy_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows);

void write_master_ledger_csv(const std::string& path, const EntropyLedger& entropy,
                             const EntropyLedger& free_energy);

// 64-bit FNV-1a over the raw bytes, as a hex string.
std::string file_digest(const std::string& path);

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> parameters;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> input_digests;
  std::vector<std::string> output_paths;
  std::map<std::string, std::string> output_digests;
  double wall_time_s = 0.0;
};

void write_manifest(const std::string& path, const RunManifest& m);

}  // namespace ldpkit
