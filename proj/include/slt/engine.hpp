#pragma once

#include <cstdint>
#include <vector>

#include "slt/model.hpp"
#include "slt/rng.hpp"

namespace slt {

/// Lazy Poisson marks on Sigma x R+ with intensity pi (x) Lebesgue.
/// Only the lowest unconsumed mark per site is materialized; consuming
/// it draws the next Exponential(pi(x)) gap from that site's substream.
class MarkStream {
 public:
  MarkStream(const std::vector<double>& pi, std::uint64_t seed);

  double lowest(std::size_t site) const { return next_[site]; }
  /// Consume the lowest mark at `site` and advance the stream.
  double consume(std::size_t site);
  std::size_t sites() const { return next_.size(); }
  const std::vector<std::pair<std::size_t, double>>& consumed() const {
    return log_;
  }

 private:
  std::vector<double> pi_;
  std::vector<double> next_;
  std::vector<Rng> gen_;
  std::vector<std::pair<std::size_t, double>> log_;
};

/// One soft-local-time run record.
struct SltTrace {
  std::size_t n = 0;
  std::vector<double> xi;          // xi_1..xi_n
  std::vector<std::size_t> sites;  // x_1..x_n
  std::vector<double> heights;     // t_1..t_n
  std::vector<double> curve;       // final G over Sigma
  // permuted construction only:
  std::vector<double> curve_at_split;  // G at step |H^c|
  std::size_t split = 0;               // |H^c|
};

/// Bernoulli flags, regeneration times, block lengths, the set H of
/// size-one-block indices and the permutation S that defers them.
struct RegenSchedule {
  std::vector<int> I;            // I_1..I_n, I_1 = 1
  std::vector<std::size_t> rho;  // regeneration times (j with I_j = 1)
  std::vector<std::size_t> T;    // block lengths
  std::vector<std::size_t> H;    // sorted members of H
  std::vector<std::size_t> S;    // S[j-1] = S(j), a bijection on {1..n}
  std::size_t sigma_n = 0;       // first block index past n

  std::size_t h_size() const { return H.size(); }
  std::size_t hc_size() const { return I.size() - H.size(); }
  /// S^{-1}(i) for i in {1..n}.
  std::size_t s_inverse(std::size_t i) const;
};

/// One step of the soft local time scheme: raise the curve along
/// density g until the first unconsumed mark is hit.
struct PickResult {
  double xi;
  std::size_t site;
  double height;
};
PickResult next_pick(const std::vector<double>& curve,
                     const std::vector<double>& density, MarkStream& streams);

/// Schedule from explicit flags (I[0] must be 1); exact H and S per
/// their defining formulas.
RegenSchedule schedule_from_flags(std::vector<int> flags);
/// Draw I_2..I_n ~ Bernoulli(q) and build the schedule.
RegenSchedule build_schedule(std::size_t n, double q, Rng& rng);

/// Classical construction: step 1 uses nu, step i uses p(x_{i-1}, .).
SltTrace run_classical(const TransitionModel& model, std::size_t n,
                       std::uint64_t seed);

/// Regeneration construction: density 1 when I_i = 1, mu otherwise.
std::pair<SltTrace, RegenSchedule> run_regen(const TransitionModel& model,
                                             std::size_t n, std::uint64_t seed);

/// Permuted-block construction: step i uses I_{S^{-1}(i)}; all steps
/// past |H^c| use density 1. Records the curve at the split.
std::pair<SltTrace, RegenSchedule> run_permuted(const TransitionModel& model,
                                                std::size_t n,
                                                std::uint64_t seed);
SltTrace run_permuted_with_schedule(const TransitionModel& model,
                                    const RegenSchedule& sched,
                                    MarkStream& streams);

/// i.i.d. construction: flat density 1 at every step.
SltTrace run_iid(const TransitionModel& model, std::size_t n,
                 std::uint64_t seed);

/// Visit counts of a trace's site sequence.
std::vector<long> local_time_field(const SltTrace& trace, std::size_t n_sites);

}  // namespace slt
