#include "slt/harness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "slt/engine.hpp"

namespace slt {

WhatBlock simulate_what_block(const TransitionModel& model, Rng& rng) {
  const std::size_t k = model.size();
  WhatBlock b;
  b.T = rng.geometric(model.q);
  b.values.assign(k, 0.0);
  // stationary path M_0, M_1, ... (only M_0..M_{T-1} enter)
  std::size_t m_prev = rng.discrete(model.space.pi);
  for (long step = 1; step <= b.T; ++step) {
    double e = rng.exponential(1.0);
    b.e_sum += e;
    for (std::size_t x = 0; x < k; ++x)
      b.values[x] += e * (1.0 - model.density[m_prev][x]);
    if (step < b.T) {
      // next stationary state: P(m_prev, .) = p(m_prev, .) pi(.)
      std::vector<double> w(k);
      for (std::size_t y = 0; y < k; ++y)
        w[y] = model.density[m_prev][y] * model.space.pi[y];
      m_prev = rng.discrete(w);
    }
  }
  return b;
}

std::vector<WhatBlock> simulate_what_blocks(const TransitionModel& model,
                                            std::size_t m, std::uint64_t seed) {
  std::vector<WhatBlock> out(m);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < static_cast<long>(m); ++i) {
    Rng rng(substream_seed(seed, "what-block", static_cast<std::uint64_t>(i)));
    out[i] = simulate_what_block(model, rng);
  }
  return out;
}

std::vector<EpeEstimate> estimate_epe(const TransitionModel& model,
                                      const std::vector<std::size_t>& n_values,
                                      std::size_t reps, std::uint64_t seed) {
  if (reps < 100) throw std::invalid_argument("estimate_epe: reps >= 100");
  const std::size_t k = model.size();
  std::vector<EpeEstimate> out;
  for (std::size_t n : n_values) {
    std::vector<double> sample(reps);
#pragma omp parallel for schedule(static)
    for (long r = 0; r < static_cast<long>(reps); ++r) {
      Rng rng(substream_seed(seed, "epe", static_cast<std::uint64_t>(r) * 1000003 + n));
      std::vector<double> acc(k, 0.0);
      for (std::size_t j = 0; j < n; ++j) {
        WhatBlock b = simulate_what_block(model, rng);
        for (std::size_t x = 0; x < k; ++x) acc[x] += b.values[x];
      }
      double sup = 0.0;
      for (double v : acc) sup = std::max(sup, std::abs(v));
      sample[r] = sup / std::sqrt(static_cast<double>(n));
    }
    ReplicateReport rep = summarize(sample);
    out.push_back({n, rep.estimate, rep.stderr_});
  }
  return out;
}

std::vector<double> measure_rn(const TransitionModel& model, std::size_t n,
                               std::size_t reps, std::uint64_t seed) {
  std::vector<double> sample(reps);
#pragma omp parallel for schedule(dynamic)
  for (long r = 0; r < static_cast<long>(reps); ++r) {
    SltTrace tr = run_classical(
        model, n, substream_seed(seed, "rn", static_cast<std::uint64_t>(r)));
    double total = std::accumulate(tr.xi.begin(), tr.xi.end(), 0.0);
    double sup = 0.0;
    for (double g : tr.curve) sup = std::max(sup, std::abs(total - g));
    sample[r] = sup;
  }
  std::sort(sample.begin(), sample.end());
  return sample;
}

std::vector<double> run_replicates_serial(std::size_t reps, std::uint64_t seed,
                                          const std::string& tag,
                                          const ReplicateFn& fn) {
  std::vector<double> out(reps);
  for (std::size_t i = 0; i < reps; ++i) out[i] = fn(substream_seed(seed, tag, i), i);
  return out;
}

std::vector<double> run_replicates_parallel(std::size_t reps, std::uint64_t seed,
                                            const std::string& tag,
                                            const ReplicateFn& fn, int threads) {
  std::vector<double> out(reps);
#ifdef _OPENMP
  if (threads > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(threads)
    for (long i = 0; i < static_cast<long>(reps); ++i)
      out[i] = fn(substream_seed(seed, tag, static_cast<std::uint64_t>(i)), i);
    return out;
  }
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < static_cast<long>(reps); ++i)
    out[i] = fn(substream_seed(seed, tag, static_cast<std::uint64_t>(i)), i);
#else
  (void)threads;
  for (std::size_t i = 0; i < reps; ++i) out[i] = fn(substream_seed(seed, tag, i), i);
#endif
  return out;
}

ReplicateReport summarize(const std::vector<double>& sample) {
  if (sample.empty()) throw std::invalid_argument("summarize: empty sample");
  ReplicateReport rep;
  rep.reps = sample.size();
  // pairwise summation keeps the reduction order fixed
  std::function<double(std::size_t, std::size_t)> psum =
      [&](std::size_t lo, std::size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += sample[i];
      return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return psum(lo, mid) + psum(mid, hi);
  };
  const double n = static_cast<double>(sample.size());
  rep.estimate = psum(0, sample.size()) / n;
  double ss = 0.0;
  for (double v : sample) ss += (v - rep.estimate) * (v - rep.estimate);
  double var = sample.size() > 1 ? ss / (n - 1.0) : 0.0;
  rep.stderr_ = std::sqrt(var / n);
  rep.ci95 = {rep.estimate - 1.959963984540054 * rep.stderr_,
              rep.estimate + 1.959963984540054 * rep.stderr_};
  return rep;
}

}  // namespace slt
