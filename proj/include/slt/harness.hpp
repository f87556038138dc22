#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "slt/model.hpp"
#include "slt/rng.hpp"
#include "slt/stats.hpp"

namespace slt {

struct ReplicateReport {
  std::size_t reps = 0;
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::pair<double, double> ci95{0.0, 0.0};
  std::map<std::string, double> test_stats;
};

/// One regeneration block functional: W-hat(x) = sum_{k<=T} e_k (1 - p(M_{k-1}, x)).
struct WhatBlock {
  long T = 0;
  double e_sum = 0.0;  // sum of the Exp(1) draws
  std::vector<double> values;
};

WhatBlock simulate_what_block(const TransitionModel& model, Rng& rng);
std::vector<WhatBlock> simulate_what_blocks(const TransitionModel& model,
                                            std::size_t m, std::uint64_t seed);

/// Per-n normalized mean of sup_x |sum_{k<=n} What_k(x)| / sqrt(n).
struct EpeEstimate {
  std::size_t n;
  double mean;
  double stderr_;
};
std::vector<EpeEstimate> estimate_epe(const TransitionModel& model,
                                      const std::vector<std::size_t>& n_values,
                                      std::size_t reps, std::uint64_t seed);

/// Empirical quantiles of R_n = sup_x |sum xi_i - G_n^X(x)| from
/// classical runs. Returns the sorted sample of R_n values.
std::vector<double> measure_rn(const TransitionModel& model, std::size_t n,
                               std::size_t reps, std::uint64_t seed);

/// Deterministic replicate map: f(replicate seed, index) -> double.
/// The OpenMP version writes each result to its own slot, so the
/// output is identical for any thread count; the serial version is the
/// reference used by the tests and the benchmark.
using ReplicateFn = std::function<double(std::uint64_t, std::size_t)>;
std::vector<double> run_replicates_serial(std::size_t reps, std::uint64_t seed,
                                          const std::string& tag,
                                          const ReplicateFn& fn);
std::vector<double> run_replicates_parallel(std::size_t reps, std::uint64_t seed,
                                            const std::string& tag,
                                            const ReplicateFn& fn,
                                            int threads = 0);

/// Mean / stderr / normal 95% CI summary of a sample.
ReplicateReport summarize(const std::vector<double>& sample);

}  // namespace slt
