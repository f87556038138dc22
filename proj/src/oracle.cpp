#include "slt/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "slt/binproc.hpp"

namespace slt {

namespace {

// C(n, k) for small k, exact in size_t range used here.
std::size_t choose(std::size_t n, std::size_t k) {
  if (k > n) return 0;
  std::size_t r = 1;
  for (std::size_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// number of compositions of n into `parts` parts
std::size_t ncomp(std::size_t n, std::size_t parts) {
  return choose(n + parts - 1, parts - 1);
}

}  // namespace

std::size_t composition_rank(const std::vector<long>& c) {
  const std::size_t k = c.size();
  std::size_t total = 0;
  for (long v : c) total += static_cast<std::size_t>(v);
  std::size_t rank = 0;
  std::size_t rem = total;
  for (std::size_t pos = 0; pos + 1 < k; ++pos) {
    const std::size_t p = k - pos - 1;
    // sum_{v < c[pos]} ncomp(rem - v, p), telescoped
    rank += choose(rem + p, p) - choose(rem - c[pos] + p, p);
    rem -= static_cast<std::size_t>(c[pos]);
  }
  return rank;
}

CountDistribution chain_localtime_dist(const TransitionModel& model,
                                       std::size_t n, double cap) {
  const std::size_t k = model.size();
  if (n == 0) throw std::invalid_argument("chain_localtime_dist: n >= 1");
  if (static_cast<double>(ncomp(n, k)) * k > cap)
    throw std::invalid_argument("chain_localtime_dist: DP cap exceeded");

  // transition probabilities P(x,y) = p(x,y) pi(y)
  std::vector<std::vector<double>> P(k, std::vector<double>(k));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      P[x][y] = model.density[x][y] * model.space.pi[y];

  // layer i: probs indexed by (composition rank of counts) * k + last state
  std::vector<double> layer(ncomp(1, k) * k, 0.0);
  {
    std::vector<long> c(k, 0);
    for (std::size_t y = 0; y < k; ++y) {
      c[y] = 1;
      layer[composition_rank(c) * k + y] = model.nu[y] * model.space.pi[y];
      c[y] = 0;
    }
  }

  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t nc_new = ncomp(i + 1, k);
    std::vector<double> next(nc_new * k, 0.0);
    if (k == 2) {
      // rank of a two-part composition is its first coordinate
      const long ni = static_cast<long>(i);
#pragma omp parallel for schedule(static)
      for (long r = 0; r <= ni + 1; ++r) {
        for (std::size_t y = 0; y < 2; ++y) {
          const long src = r - (y == 0 ? 1 : 0);
          if (src < 0 || src > ni) continue;
          if (y == 1 && (ni - src) < 0) continue;
          double acc = 0.0;
          for (std::size_t l = 0; l < 2; ++l) acc += layer[src * 2 + l] * P[l][y];
          next[r * 2 + y] = acc;
        }
      }
    } else {
      const auto comps = enumerate_compositions(i + 1, k);
#pragma omp parallel for schedule(static)
      for (long rr = 0; rr < static_cast<long>(comps.size()); ++rr) {
        std::vector<long> c = comps[rr];
        for (std::size_t y = 0; y < k; ++y) {
          if (c[y] == 0) continue;
          c[y] -= 1;
          const std::size_t src = composition_rank(c);
          c[y] += 1;
          double acc = 0.0;
          for (std::size_t l = 0; l < k; ++l) acc += layer[src * k + l] * P[l][y];
          next[rr * k + y] += acc;
        }
      }
    }
    layer.swap(next);
  }

  CountDistribution dist;
  dist.support = enumerate_compositions(n, k);
  dist.probs.assign(dist.support.size(), 0.0);
  for (std::size_t r = 0; r < dist.support.size(); ++r) {
    double acc = 0.0;
    for (std::size_t l = 0; l < k; ++l) acc += layer[r * k + l];
    dist.probs[r] = acc;
  }
  return dist;
}

CountDistribution chain_localtime_dist_enum(const TransitionModel& model,
                                            std::size_t n, double cap) {
  const std::size_t k = model.size();
  if (std::pow(static_cast<double>(k), static_cast<double>(n)) > cap)
    throw std::invalid_argument("chain_localtime_dist_enum: trajectory cap exceeded");
  std::vector<std::vector<double>> P(k, std::vector<double>(k));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      P[x][y] = model.density[x][y] * model.space.pi[y];

  CountDistribution dist;
  dist.support = enumerate_compositions(n, k);
  dist.probs.assign(dist.support.size(), 0.0);

  std::vector<long> counts(k, 0);
  auto rec = [&](auto&& self, std::size_t step, std::size_t last,
                 double prob) -> void {
    if (step == n) {
      dist.probs[composition_rank(counts)] += prob;
      return;
    }
    for (std::size_t y = 0; y < k; ++y) {
      double pstep = step == 0 ? model.nu[y] * model.space.pi[y] : P[last][y];
      if (pstep == 0.0) continue;
      ++counts[y];
      self(self, step + 1, y, prob * pstep);
      --counts[y];
    }
  };
  rec(rec, 0, 0, 1.0);
  return dist;
}

CountDistribution multinomial_dist(std::size_t n, const std::vector<double>& pi) {
  CountDistribution dist;
  dist.support = enumerate_compositions(n, pi.size());
  dist.probs.reserve(dist.support.size());
  for (const auto& c : dist.support)
    dist.probs.push_back(std::exp(multinomial_log_pmf(c, pi)));
  return dist;
}

double exact_tv_localtimes(const TransitionModel& model, std::size_t n,
                           double cap) {
  CountDistribution chain = chain_localtime_dist(model, n, cap);
  double tv = 0.0;
  for (std::size_t r = 0; r < chain.support.size(); ++r) {
    double pm = std::exp(multinomial_log_pmf(chain.support[r], model.space.pi));
    tv += std::abs(chain.probs[r] - pm);
  }
  return 0.5 * tv;
}

double trajectory_tv(const TransitionModel& model, std::size_t n, double cap) {
  const std::size_t k = model.size();
  if (std::pow(static_cast<double>(k), static_cast<double>(n)) > cap)
    throw std::invalid_argument("trajectory_tv: trajectory cap exceeded");
  std::vector<std::vector<double>> P(k, std::vector<double>(k));
  for (std::size_t x = 0; x < k; ++x)
    for (std::size_t y = 0; y < k; ++y)
      P[x][y] = model.density[x][y] * model.space.pi[y];
  double tv = 0.0;
  auto rec = [&](auto&& self, std::size_t step, std::size_t last, double pc,
                 double pi_prob) -> void {
    if (step == n) {
      tv += std::abs(pc - pi_prob);
      return;
    }
    for (std::size_t y = 0; y < k; ++y) {
      double pstep = step == 0 ? model.nu[y] * model.space.pi[y] : P[last][y];
      self(self, step + 1, y, pc * pstep, pi_prob * model.space.pi[y]);
    }
  };
  rec(rec, 0, 0, 1.0, 1.0);
  return 0.5 * tv;
}

namespace {

double repeat_event_prob(const std::vector<double>& init,
                         const std::vector<std::vector<double>>& T,
                         std::size_t n, double thr) {
  // dp over (repeat count r, last state); pull-based layers
  const long nn = static_cast<long>(n);
  std::vector<double> dp(2 * n, 0.0);
  dp[0 * 2 + 0] = init[0];
  dp[0 * 2 + 1] = init[1];
  std::vector<double> next(2 * n, 0.0);
  for (long j = 2; j <= nn; ++j) {
    std::fill(next.begin(), next.end(), 0.0);
#pragma omp parallel for schedule(static)
    for (long r = 0; r < j; ++r) {
      for (std::size_t y = 0; y < 2; ++y) {
        double acc = 0.0;
        // repeat transition (l == y) raises r by one
        if (r >= 1) acc += dp[(r - 1) * 2 + y] * T[y][y];
        acc += dp[r * 2 + (1 - y)] * T[1 - y][y];
        next[r * 2 + y] = acc;
      }
    }
    dp.swap(next);
  }
  double p = 0.0;
  for (long r = 0; r < nn; ++r)
    if (static_cast<double>(r) > static_cast<double>(n) * thr)
      p += dp[r * 2 + 0] + dp[r * 2 + 1];
  return p;
}

}  // namespace

std::pair<double, double> xi_event_probs(const TransitionModel& model,
                                         std::size_t n, double threshold) {
  if (model.size() != 2)
    throw std::invalid_argument("xi_event_probs: two-state models only");
  if (n < 2) throw std::invalid_argument("xi_event_probs: n >= 2 required");
  std::vector<std::vector<double>> PX(2, std::vector<double>(2));
  std::vector<std::vector<double>> PY(2, std::vector<double>(2));
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      PX[x][y] = model.density[x][y] * model.space.pi[y];
      PY[x][y] = model.space.pi[y];
    }
  if (threshold < 0.0) {
    double stay = 0.5 * (PX[0][0] + PX[1][1]);
    threshold = 0.5 + 0.5 * (stay - 0.5);
  }
  std::vector<double> initX = {model.nu[0] * model.space.pi[0],
                               model.nu[1] * model.space.pi[1]};
  std::vector<double> initY = {model.space.pi[0], model.space.pi[1]};
  return {repeat_event_prob(initX, PX, n, threshold),
          repeat_event_prob(initY, PY, n, threshold)};
}

}  // namespace slt
