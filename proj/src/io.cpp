#include "ldpkit/io.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "ldpkit/errors.hpp"

namespace ldpkit {

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw validation_error("cannot write file: " + path);
  return out;
}

void write_state_header(std::ofstream& out, const std::string& first, size_t dim,
                        const std::string& prefix, const std::string& last = {}) {
  out << first;
  for (size_t i = 0; i < dim; ++i) out << "," << prefix << (i + 1);
  if (!last.empty()) out << "," << last;
  out << "\n";
}

}  // namespace

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  auto out = open_out(path);
  const size_t dim = traj.states.empty() ? 0 : traj.states.front().size();
  write_state_header(out, "t", dim, "z");
  for (size_t k = 0; k < traj.times.size(); ++k) {
    out << format_double(traj.times[k]);
    for (double v : traj.states[k]) out << "," << format_double(v);
    out << "\n";
  }
}

void write_histogram_csv(const std::string& path, const EnsembleHistogram& hist) {
  auto out = open_out(path);
  out << "";
  for (size_t d = 0; d < hist.axes.size(); ++d) out << (d ? "," : "") << "z" << (d + 1) << "_center";
  out << ",count\n";
  for (size_t b = 0; b < hist.counts.size(); ++b) {
    if (hist.counts[b] == 0) continue;
    const Vec c = hist.bin_center(b);
    for (size_t d = 0; d < c.size(); ++d) out << (d ? "," : "") << format_double(c[d]);
    out << "," << hist.counts[b] << "\n";
  }
}

void write_rate_function_csv(const std::string& path,
                             const std::vector<RateFunctionPoint>& points) {
  auto out = open_out(path);
  const size_t dim = points.empty() ? 0 : points.front().z.size();
  out << "";
  for (size_t d = 0; d < dim; ++d) out << (d ? "," : "") << "z" << (d + 1);
  out << ",phi_hat\n";
  for (const auto& p : points) {
    for (size_t d = 0; d < p.z.size(); ++d) out << (d ? "," : "") << format_double(p.z[d]);
    out << "," << format_double(p.phi_hat) << "\n";
  }
}

void write_residual_scan_csv(const std::string& path, const std::vector<Vec>& zs,
                             const Vec& residuals,
                             const std::vector<std::string>& columns) {
  auto out = open_out(path);
  const size_t dim = zs.empty() ? 0 : zs.front().size();
  for (size_t d = 0; d < dim; ++d) {
    if (d) out << ",";
    if (d < columns.size())
      out << columns[d];
    else
      out << "z" << (d + 1);
  }
  out << ",residual\n";
  for (size_t k = 0; k < zs.size(); ++k) {
    for (size_t d = 0; d < zs[k].size(); ++d) out << (d ? "," : "") << format_double(zs[k][d]);
    out << "," << format_double(residuals[k]) << "\n";
  }
}

void write_lyapunov_csv(const std::string& path, const LyapunovScan& scan) {
  auto out = open_out(path);
  out << "t,phi,dphi_dt\n";
  for (size_t k = 0; k < scan.times.size(); ++k)
    out << format_double(scan.times[k]) << "," << format_double(scan.phi[k]) << ","
        << format_double(scan.dphi_dt[k]) << "\n";
}

void write_phase_flow_csv(const std::string& path, const PhaseFlow& flow) {
  auto out = open_out(path);
  const size_t dim = flow.points.empty() ? 0 : flow.points.front().z.size();
  out << "t";
  for (size_t i = 0; i < dim; ++i) out << ",z" << (i + 1);
  for (size_t i = 0; i < dim; ++i) out << ",y" << (i + 1);
  out << "\n";
  for (size_t k = 0; k < flow.times.size(); ++k) {
    out << format_double(flow.times[k]);
    for (double v : flow.points[k].z) out << "," << format_double(v);
    for (double v : flow.points[k].y) out << "," << format_double(v);
    out << "\n";
  }
}

void write_path_csv(const std::string& path, const DiscretePath& p) {
  auto out = open_out(path);
  const size_t dim = p.states.empty() ? 0 : p.states.front().size();
  write_state_header(out, "t", dim, "z");
  for (size_t k = 0; k < p.times.size(); ++k) {
    out << format_double(p.times[k]);
    for (double v : p.states[k]) out << "," << format_double(v);
    out << "\n";
  }
}

void write_entropy_ledger_csv(const std::string& path, const std::vector<LedgerRow>& rows) {
  auto out = open_out(path);
  out << "t,entropy_change,production,mech_drive,chem_drive,exchange,sigma1,sigma2\n";
  for (const auto& r : rows) {
    out << format_double(r.t) << "," << format_double(r.terms.entropy_change) << ","
        << format_double(r.terms.entropy_production) << ","
        << format_double(r.terms.mechanical_drive) << ","
        << format_double(r.terms.chemical_drive) << ","
        << format_double(r.terms.chemomechanical_exchange) << "," << format_double(r.sigma1)
        << "," << format_double(r.sigma2) << "\n";
  }
}

void write_master_ledger_csv(const std::string& path, const EntropyLedger& entropy,
                             const EntropyLedger& free_energy) {
  auto out = open_out(path);
  out << "state,s_production,s_exchange,f_production,f_exchange\n";
  for (size_t i = 0; i < entropy.production.size(); ++i) {
    out << i << "," << format_double(entropy.production[i]) << ","
        << format_double(entropy.exchange[i]) << "," << format_double(free_energy.production[i])
        << "," << format_double(free_energy.exchange[i]) << "\n";
  }
  out << "total," << format_double(entropy.total_production) << ","
      << format_double(entropy.total_exchange) << ","
      << format_double(free_energy.total_production) << ","
      << format_double(free_energy.total_exchange) << "\n";
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot read file for digest: " + path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[65536];
  while (in) {
    in.read(buf, sizeof buf);
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  char hex[20];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(h));
  return hex;
}

void write_manifest(const std::string& path, const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["parameters"] = m.parameters;
  j["seed"] = m.seed;
  j["input_digests"] = m.input_digests;
  j["output_paths"] = m.output_paths;
  j["output_digests"] = m.output_digests;
  j["wall_time_s"] = m.wall_time_s;
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

}  // namespace ldpkit
