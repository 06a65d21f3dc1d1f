// Compares the OpenMP ensemble driver against the serial reference and checks
// that both produce bit-identical trajectories.

#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ldpkit/model.hpp"
#include "ldpkit/simulate.hpp"

using namespace ldpkit;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct BenchCase {
  std::string name;
  GeneratorSpec spec;
  Vec z0;
  SimConfig cfg;
};

int run_case(const BenchCase& bc) {
  auto t0 = std::chrono::steady_clock::now();
  const auto serial = simulate_paths_serial(bc.spec, bc.z0, bc.cfg);
  const double t_serial = seconds_since(t0);

  t0 = std::chrono::steady_clock::now();
  const auto parallel = simulate_paths(bc.spec, bc.z0, bc.cfg);
  const double t_parallel = seconds_since(t0);

  bool identical = serial.size() == parallel.size();
  for (size_t i = 0; identical && i < serial.size(); ++i)
    identical = serial[i] == parallel[i];

  std::printf("%-14s %8ld paths  serial %7.3fs  parallel %7.3fs  speedup %.2fx  %s\n",
              bc.name.c_str(), bc.cfg.n_paths, t_serial, t_parallel,
              t_serial / t_parallel, identical ? "bit-identical" : "MISMATCH");
  return identical ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  long scale = 1;
  if (argc > 1) scale = std::atol(argv[1]);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (OpenMP disabled)\n");
#endif

  BenchCase ou{"ou-diffusion", make_ou_spec(1.0, 1.0), {1.0},
               {0.05, 5.0, 0.01, 20000 * scale, 42, 1L << 40}};
  BenchCase bd{"birth-death", make_birth_death_spec(2.0, 1.0), {0.0},
               {0.01, 5.0, 0.01, 2000 * scale, 42, 1L << 40}};
  BenchCase hy{"hybrid", make_hybrid_spec(1.0, 1.0, 2.0, 1.0), {0.5},
               {0.01, 2.0, 0.01, 2000 * scale, 42, 1L << 40}};

  int rc = 0;
  rc |= run_case(ou);
  rc |= run_case(bd);
  rc |= run_case(hy);
  return rc;
}
