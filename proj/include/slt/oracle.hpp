#pragma once

#include <cstddef>
#include <vector>

#include "slt/model.hpp"

namespace slt {

/// Exact law of a count vector over a finite ground set.
struct CountDistribution {
  std::vector<std::vector<long>> support;  // compositions, lexicographic
  std::vector<double> probs;
};

/// Lexicographic rank of a composition among compositions of its total
/// into `parts` parts (inverse of enumerate_compositions order).
std::size_t composition_rank(const std::vector<long>& c);

/// Exact law of the local-time field of X_1..X_n (X_1 ~ nu d pi,
/// transitions P) by dynamic programming over (last state, count
/// vector). Pull-based update, deterministic under OpenMP.
CountDistribution chain_localtime_dist(const TransitionModel& model,
                                       std::size_t n, double cap = 1e7);

/// Serial reference: same law by full trajectory enumeration.
CountDistribution chain_localtime_dist_enum(const TransitionModel& model,
                                            std::size_t n, double cap = 1e6);

/// Multinomial(n, pi) on the same composition ordering.
CountDistribution multinomial_dist(std::size_t n, const std::vector<double>& pi);

/// Exact TV between the chain local-time field and Multinomial(n, pi).
double exact_tv_localtimes(const TransitionModel& model, std::size_t n,
                           double cap = 1e7);

/// Exact TV between the trajectory laws of X and the i.i.d. sequence.
double trajectory_tv(const TransitionModel& model, std::size_t n,
                     double cap = 1e6);

/// Exact P[repeat-frequency event] for the chain and the i.i.d.
/// sequence on a two-state model: (1/n) sum 1{Z_j = Z_{j+1}} > threshold.
/// threshold < 0 means the default 1/2 + eps'/2 with
/// eps' = (P(0,0)+P(1,1))/2 - 1/2.
std::pair<double, double> xi_event_probs(const TransitionModel& model,
                                         std::size_t n, double threshold = -1.0);

}  // namespace slt
