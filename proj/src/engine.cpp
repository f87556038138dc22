#include "slt/engine.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slt {

MarkStream::MarkStream(const std::vector<double>& pi, std::uint64_t seed)
    : pi_(pi) {
  next_.reserve(pi.size());
  gen_.reserve(pi.size());
  for (std::size_t x = 0; x < pi.size(); ++x) {
    gen_.emplace_back(substream_seed(seed, "mark-site", x));
    next_.push_back(gen_.back().exponential(pi_[x]));
  }
}

double MarkStream::consume(std::size_t site) {
  double t = next_[site];
  next_[site] += gen_[site].exponential(pi_[site]);
  log_.emplace_back(site, t);
  return t;
}

std::size_t RegenSchedule::s_inverse(std::size_t i) const {
  // S is a bijection on {1..n}; invert by scan (n is desk scale), but
  // cache-free callers should use the precomputed inverse in hot loops.
  for (std::size_t j = 0; j < S.size(); ++j)
    if (S[j] == i) return j + 1;
  throw std::logic_error("s_inverse: not a bijection");
}

PickResult next_pick(const std::vector<double>& curve,
                     const std::vector<double>& density, MarkStream& streams) {
  const std::size_t n = curve.size();
  double best = std::numeric_limits<double>::infinity();
  std::size_t best_site = n;
  for (std::size_t z = 0; z < n; ++z) {
    if (density[z] <= 0.0) continue;  // zero density can never reach a mark
    double ell = (streams.lowest(z) - curve[z]) / density[z];
    if (ell < best) {  // ties: lowest site index wins
      best = ell;
      best_site = z;
    }
  }
  if (best_site == n) throw std::invalid_argument("next_pick: all-zero density");
  double height = streams.consume(best_site);
  return {best, best_site, height};
}

RegenSchedule schedule_from_flags(std::vector<int> flags) {
  const std::size_t n = flags.size();
  if (n == 0) throw std::invalid_argument("schedule: n >= 1 required");
  if (flags[0] != 1) throw std::invalid_argument("schedule: I_1 must be 1");

  RegenSchedule s;
  s.I = std::move(flags);
  for (std::size_t j = 1; j <= n; ++j)
    if (s.I[j - 1] == 1) s.rho.push_back(j);
  for (std::size_t k = 0; k + 1 < s.rho.size(); ++k)
    s.T.push_back(s.rho[k + 1] - s.rho[k]);
  s.sigma_n = s.rho.size() + 1;

  // H = {j in {2..n-1}: I_j I_{j+1} = 1}  u  {n if I_n = 1}
  std::vector<bool> in_h(n + 1, false);
  for (std::size_t j = 2; j + 1 <= n; ++j)
    if (s.I[j - 1] == 1 && s.I[j] == 1) {
      in_h[j] = true;
      s.H.push_back(j);
    }
  if (s.I[n - 1] == 1) {
    in_h[n] = true;
    s.H.push_back(n);
  }

  const std::size_t hc = n - s.H.size();
  s.S.resize(n);
  std::size_t prefix = 0;  // sum_{i=2}^{j-1} I_i I_{i+1}
  std::size_t h_rank = 0;
  for (std::size_t j = 1; j <= n; ++j) {
    if (in_h[j]) {
      ++h_rank;
      s.S[j - 1] = hc + h_rank;
    } else {
      s.S[j - 1] = j - prefix;
    }
    if (j >= 2 && j + 1 <= n && s.I[j - 1] == 1 && s.I[j] == 1) ++prefix;
  }
  return s;
}

RegenSchedule build_schedule(std::size_t n, double q, Rng& rng) {
  if (n == 0) throw std::invalid_argument("build_schedule: n >= 1 required");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("build_schedule: q out of [0,1]");
  std::vector<int> flags(n, 0);
  flags[0] = 1;
  for (std::size_t j = 1; j < n; ++j) flags[j] = rng.bernoulli(q) ? 1 : 0;
  return schedule_from_flags(std::move(flags));
}

namespace {

// Shared driver: step 1 uses nu, later steps use the supplied density
// chooser (prev site, step index 1-based) -> density vector ref.
template <typename DensityAt>
SltTrace run_generic(const TransitionModel& model, std::size_t n,
                     MarkStream& streams, DensityAt&& density_at) {
  if (n == 0) throw std::invalid_argument("run: n >= 1 required");
  const std::size_t m = model.size();
  SltTrace tr;
  tr.n = n;
  tr.curve.assign(m, 0.0);
  for (std::size_t i = 1; i <= n; ++i) {
    const std::vector<double>& g =
        (i == 1) ? model.nu : density_at(tr.sites.back(), i);
    PickResult p = next_pick(tr.curve, g, streams);
    for (std::size_t x = 0; x < m; ++x) tr.curve[x] += p.xi * g[x];
    tr.xi.push_back(p.xi);
    tr.sites.push_back(p.site);
    tr.heights.push_back(p.height);
  }
  return tr;
}

const std::vector<double>& ones(std::size_t m) {
  thread_local std::vector<double> v;
  if (v.size() != m) v.assign(m, 1.0);
  return v;
}

}  // namespace

SltTrace run_classical(const TransitionModel& model, std::size_t n,
                       std::uint64_t seed) {
  MarkStream streams(model.space.pi, seed);
  return run_generic(model, n, streams,
                     [&](std::size_t prev, std::size_t) -> const std::vector<double>& {
                       return model.density[prev];
                     });
}

std::pair<SltTrace, RegenSchedule> run_regen(const TransitionModel& model,
                                             std::size_t n, std::uint64_t seed) {
  Rng flag_rng(substream_seed(seed, "regen-flags", 0));
  RegenSchedule sched = build_schedule(n, model.q, flag_rng);
  MarkStream streams(model.space.pi, substream_seed(seed, "marks", 0));
  SltTrace tr = run_generic(
      model, n, streams,
      [&](std::size_t prev, std::size_t i) -> const std::vector<double>& {
        return sched.I[i - 1] == 1 ? ones(model.size()) : model.mu[prev];
      });
  return {std::move(tr), std::move(sched)};
}

SltTrace run_permuted_with_schedule(const TransitionModel& model,
                                    const RegenSchedule& sched,
                                    MarkStream& streams) {
  const std::size_t n = sched.I.size();
  std::vector<std::size_t> sinv(n + 1, 0);
  for (std::size_t j = 1; j <= n; ++j) sinv[sched.S[j - 1]] = j;
  const std::size_t split = sched.hc_size();
  SltTrace tr = run_generic(
      model, n, streams,
      [&](std::size_t prev, std::size_t i) -> const std::vector<double>& {
        if (i > split && sched.I[sinv[i] - 1] != 1)
          throw std::logic_error("permuted run: tail step with I = 0");
        return sched.I[sinv[i] - 1] == 1 ? ones(model.size()) : model.mu[prev];
      });
  tr.split = split;
  // Reconstruct G at the split from the increments (the driver only
  // keeps the running curve).
  tr.curve_at_split.assign(model.size(), 0.0);
  {
    std::vector<double> g(model.size(), 0.0);
    for (std::size_t x = 0; x < model.size(); ++x)
      g[x] = tr.xi.empty() ? 0.0 : tr.xi[0] * model.nu[x];
    for (std::size_t i = 2; i <= split; ++i) {
      const std::vector<double>& gi = sched.I[sinv[i] - 1] == 1
                                          ? ones(model.size())
                                          : model.mu[tr.sites[i - 2]];
      for (std::size_t x = 0; x < model.size(); ++x) g[x] += tr.xi[i - 1] * gi[x];
    }
    if (split >= 1) tr.curve_at_split = g;
  }
  return tr;
}

std::pair<SltTrace, RegenSchedule> run_permuted(const TransitionModel& model,
                                                std::size_t n,
                                                std::uint64_t seed) {
  Rng flag_rng(substream_seed(seed, "regen-flags", 0));
  RegenSchedule sched = build_schedule(n, model.q, flag_rng);
  MarkStream streams(model.space.pi, substream_seed(seed, "marks", 0));
  SltTrace tr = run_permuted_with_schedule(model, sched, streams);
  return {std::move(tr), std::move(sched)};
}

SltTrace run_iid(const TransitionModel& model, std::size_t n,
                 std::uint64_t seed) {
  TransitionModel flat = model;
  flat.nu.assign(model.size(), 1.0);
  MarkStream streams(model.space.pi, seed);
  return run_generic(flat, n, streams,
                     [&](std::size_t, std::size_t) -> const std::vector<double>& {
                       return ones(flat.size());
                     });
}

std::vector<long> local_time_field(const SltTrace& trace, std::size_t n_sites) {
  std::vector<long> counts(n_sites, 0);
  for (std::size_t s : trace.sites) ++counts[s];
  return counts;
}

}  // namespace slt
