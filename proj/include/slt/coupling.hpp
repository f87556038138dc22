#pragma once

#include <cstdint>
#include <vector>

#include "slt/engine.hpp"
#include "slt/model.hpp"
#include "slt/oracle.hpp"

namespace slt {

/// Random density (w.r.t. pi) of the gap between the flat i.i.d.
/// soft-local-time level and the chain's partial curve.
struct PsiDensity {
  std::vector<double> values;
  double sup_dev = 0.0;     // sup_x |Psi(x) - 1|
  double denominator = 0.0; // sum of tail xi
};

struct CouplingOutcome {
  std::vector<long> L_tilde;  // chain-law field
  std::vector<long> L_prime;  // i.i.d.-law field
  std::size_t b_index = 0;    // partition cell index (>= 1 unless degenerate)
  bool in_G = false;
  bool success = false;       // Upsilon
  std::size_t h_size = 0;
  bool degenerate = false;    // |H| = 0: automatic failure, no Psi
  bool met = false;           // maximal-coupling meeting indicator
  bool fallback = false;      // independent V' used (cap exceeded)
  double psi_normalization = 0.0;  // sum_x Psi(x) pi(x)
  double sup_dev = 0.0;
};

/// Psi from a permuted-construction trace; requires split < n.
PsiDensity compute_psi(const SltTrace& trace);

/// Smallest i >= 1 with sup_dev <= (1+i) F / sqrt(n), and whether the
/// run lands in G = {(1 + b) F <= 1}.
std::pair<std::size_t, bool> classify_event(const PsiDensity& psi, double F,
                                            std::size_t n);

/// Maximal coupling of Multinomial(m, base) and Multinomial(m, tilted
/// * base) count vectors, conditioned on the realized base draw.
/// P[met] = 1 - TV of the two laws; met implies equality.
struct MaxCouplingResult {
  std::vector<long> v_prime_counts;
  bool met = false;
};
MaxCouplingResult maximal_coupling_counts(std::size_t m,
                                          const std::vector<double>& base,
                                          const std::vector<double>& tilted,
                                          const std::vector<long>& v_counts,
                                          double cap, Rng& rng);

/// Exact law of the permuted-construction field given the flag sequence:
/// DP over the dependent head (step kernels fixed by the schedule)
/// convolved with the Multinomial(|H|, pi) tail. Throws when the
/// composition count exceeds cap.
CountDistribution schedule_conditional_law(const TransitionModel& model,
                                           const RegenSchedule& sched,
                                           double cap);

/// Full pipeline: permuted run, Psi, event classification, tail
/// resampling, then the maximal coupling of the realized field with
/// Multinomial(n, pi) conditionally on the schedule. Deterministic in
/// (model, n, F, seed).
CouplingOutcome run_coupling(const TransitionModel& model, std::size_t n,
                             double F, double cap, std::uint64_t seed);

}  // namespace slt
