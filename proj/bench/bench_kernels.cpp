// Compares the serial reference implementations against the OpenMP
// kernels on identical workloads and checks that outputs agree.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "slt/engine.hpp"
#include "slt/harness.hpp"
#include "slt/model.hpp"
#include "slt/oracle.hpp"

using Clock = std::chrono::steady_clock;

static double seconds(Clock::time_point a, Clock::time_point b) {
  return std::chrono::duration<double>(b - a).count();
}

int main(int argc, char** argv) {
  std::size_t reps = argc > 1 ? std::strtoull(argv[1], nullptr, 10) : 2000;
  std::size_t oracle_n = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 4000;

  slt::TransitionModel m = slt::two_state_model(0.6);

  // replicate driver: coupling-sized work item per replicate
  slt::ReplicateFn fn = [&](std::uint64_t seed, std::size_t) {
    slt::SltTrace tr = slt::run_classical(m, 200, seed);
    double s = 0.0;
    for (double x : tr.xi) s += x;
    return s;
  };

  auto t0 = Clock::now();
  auto serial = slt::run_replicates_serial(reps, 7, "bench", fn);
  auto t1 = Clock::now();
  auto parallel = slt::run_replicates_parallel(reps, 7, "bench", fn);
  auto t2 = Clock::now();
  bool same = serial == parallel;

  std::printf("replicates (%zu runs of n=200):\n", reps);
  std::printf("  serial   %8.3f s\n", seconds(t0, t1));
  std::printf("  openmp   %8.3f s  (identical output: %s)\n", seconds(t1, t2),
              same ? "yes" : "NO");

#ifdef _OPENMP
  int saved = omp_get_max_threads();
  omp_set_num_threads(1);
#endif
  auto t3 = Clock::now();
  auto d1 = slt::chain_localtime_dist(m, oracle_n, 1e9);
  auto t4 = Clock::now();
#ifdef _OPENMP
  omp_set_num_threads(saved);
#endif
  auto dN = slt::chain_localtime_dist(m, oracle_n, 1e9);
  auto t5 = Clock::now();
  double maxdiff = 0.0;
  for (std::size_t i = 0; i < d1.probs.size(); ++i) {
    double diff = d1.probs[i] - dN.probs[i];
    maxdiff = std::max(maxdiff, diff < 0 ? -diff : diff);
  }

  std::printf("exact local-time law (n=%zu, two states):\n", oracle_n);
  std::printf("  1 thread %8.3f s\n", seconds(t3, t4));
  std::printf("  openmp   %8.3f s  (max prob diff: %.3e)\n", seconds(t4, t5),
              maxdiff);
  return (same && maxdiff == 0.0) ? 0 : 1;
}
