#include <doctest.h>

#include <cmath>
#include <numeric>

#include "slt/engine.hpp"
#include "slt/harness.hpp"
#include "slt/model.hpp"
#include "slt/oracle.hpp"
#include "slt/stats.hpp"

using namespace slt;

TEST_CASE("block functional pathwise bound and flat-model degeneracy") {
  std::vector<std::vector<double>> flatP = {{0.5, 0.5}, {0.5, 0.5}};
  TransitionModel flat = validate_model(flatP);
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    WhatBlock b = simulate_what_block(flat, rng);
    for (double v : b.values) CHECK(v == doctest::Approx(0.0));
  }

  TransitionModel m = two_state_model(0.6);
  Rng rng2(6);
  for (int i = 0; i < 500; ++i) {
    WhatBlock b = simulate_what_block(m, rng2);
    CHECK(b.T >= 1);
    for (double v : b.values)
      CHECK(std::abs(v) <= m.epsilon * b.e_sum + 1e-12);
  }
}

TEST_CASE("block second moment obeys the variance bound") {
  TransitionModel m = two_state_model(0.6);
  const std::size_t reps = 100000;
  auto blocks = simulate_what_blocks(m, reps, 31);
  for (std::size_t x = 0; x < 2; ++x) {
    std::vector<double> sq(reps);
    for (std::size_t i = 0; i < reps; ++i)
      sq[i] = blocks[i].values[x] * blocks[i].values[x];
    ReplicateReport rep = summarize(sq);
    double bound = 2.0 * m.epsilon * m.epsilon / (m.q * m.q);
    CHECK(rep.estimate <= bound + 3.0 * rep.stderr_);
  }
}

TEST_CASE("block lengths are geometric with mean 1/q") {
  TransitionModel m = two_state_model(0.6);
  auto blocks = simulate_what_blocks(m, 50000, 32);
  double mean = 0.0;
  for (const auto& b : blocks) mean += double(b.T);
  mean /= double(blocks.size());
  double se = std::sqrt((1.0 - m.q) / (m.q * m.q) / double(blocks.size()));
  CHECK(std::abs(mean - 1.0 / m.q) <= 4.0 * se);
}

TEST_CASE("envelope norm Monte Carlo cross-check") {
  // rms of eps * sum_{k<=T} e_k should approach sqrt(2) eps / q
  double eps = 0.1, q = 0.9;
  Rng rng(77);
  const std::size_t reps = 200000;
  double ss = 0.0;
  for (std::size_t i = 0; i < reps; ++i) {
    long T = rng.geometric(q);
    double s = 0.0;
    for (long k = 0; k < T; ++k) s += rng.exponential(1.0);
    ss += (eps * s) * (eps * s);
  }
  double rms = std::sqrt(ss / double(reps));
  CHECK(std::abs(rms - std::sqrt(2.0) * eps / q) <=
        0.01 * std::sqrt(2.0) * eps / q);
}

TEST_CASE("normalized block sums are flat in n for the flat model") {
  std::vector<std::vector<double>> flatP = {{0.5, 0.5}, {0.5, 0.5}};
  TransitionModel flat = validate_model(flatP);
  auto est = estimate_epe(flat, {10, 50}, 200, 9);
  for (const auto& e : est) CHECK(e.mean == doctest::Approx(0.0));
}

TEST_CASE("curve deviation statistic") {
  std::vector<std::vector<double>> flatP = {{0.5, 0.5}, {0.5, 0.5}};
  TransitionModel flat = validate_model(flatP);
  auto rn = measure_rn(flat, 50, 100, 13);
  for (double v : rn) CHECK(std::abs(v) <= 1e-9);

  // pathwise R_n <= eps * sum xi for the classical run
  TransitionModel m = two_state_model(0.6);
  for (int r = 0; r < 50; ++r) {
    SltTrace tr = run_classical(m, 100, 600 + r);
    double total = std::accumulate(tr.xi.begin(), tr.xi.end(), 0.0);
    for (double g : tr.curve)
      CHECK(std::abs(total - g) <= m.epsilon * total + 1e-9);
  }
}

TEST_CASE("KS test behavior") {
  Rng rng(21);
  std::vector<double> good(100000);
  for (double& v : good) v = rng.exponential(1.0);
  CHECK(ks_exponential(good).p_value > 1e-3);

  std::vector<double> bad(1000, 1.0);
  CHECK(ks_exponential(bad).p_value < 1e-6);

  CHECK_THROWS(ks_exponential(std::vector<double>(10, 1.0)));
}

TEST_CASE("chi-square test behavior") {
  TransitionModel m = two_state_model(0.6);
  CountDistribution exact = chain_localtime_dist(m, 4);
  Rng rng(22);
  std::vector<long> counts(exact.support.size(), 0);
  const std::size_t reps = 50000;
  for (std::size_t i = 0; i < reps; ++i) ++counts[rng.discrete(exact.probs)];
  CHECK(chi_square_vs_dist(counts, exact).p_value > 1e-3);

  // shifted law must be strongly rejected
  std::vector<double> shifted = exact.probs;
  shifted[0] += 0.1;
  shifted[1] -= 0.1;
  std::vector<long> counts2(exact.support.size(), 0);
  for (std::size_t i = 0; i < reps; ++i) ++counts2[rng.discrete(shifted)];
  CHECK(chi_square_vs_dist(counts2, exact).p_value < 1e-6);

  CountDistribution single;
  single.support = {{4}};
  single.probs = {1.0};
  CHECK_THROWS(chi_square_vs_dist({100}, single));
}

TEST_CASE("replicate driver determinism") {
  ReplicateFn fn = [](std::uint64_t seed, std::size_t) {
    Rng rng(seed);
    double s = 0.0;
    for (int i = 0; i < 50; ++i) s += rng.exponential(1.0);
    return s;
  };
  auto serial = run_replicates_serial(500, 3, "tag", fn);
  auto par = run_replicates_parallel(500, 3, "tag", fn);
  auto par1 = run_replicates_parallel(500, 3, "tag", fn, 1);
  auto par4 = run_replicates_parallel(500, 3, "tag", fn, 4);
  CHECK(serial == par);
  CHECK(serial == par1);
  CHECK(serial == par4);

  ReplicateReport a = summarize(serial), b = summarize(par4);
  CHECK(a.estimate == b.estimate);
  CHECK(a.stderr_ == b.stderr_);
}

TEST_CASE("summary statistics") {
  std::vector<double> sample = {1.0, 2.0, 3.0, 4.0};
  ReplicateReport rep = summarize(sample);
  CHECK(rep.estimate == doctest::Approx(2.5));
  // sample sd sqrt(5/3), stderr sd/2
  CHECK(rep.stderr_ == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(rep.ci95.first < rep.estimate);
  CHECK(rep.ci95.second > rep.estimate);
  CHECK_THROWS(summarize(std::vector<double>{}));

  auto [lo, hi] = wilson_interval(89, 100);
  CHECK(lo > 0.8);
  CHECK(hi < 0.95);
  CHECK(lo < 0.89);
  CHECK(hi > 0.89);
}

TEST_CASE("substream seeds separate tags and indices") {
  CHECK(substream_seed(1, "a", 0) != substream_seed(1, "b", 0));
  CHECK(substream_seed(1, "a", 0) != substream_seed(1, "a", 1));
  CHECK(substream_seed(1, "a", 5) == substream_seed(1, "a", 5));
  CHECK(substream_seed(2, "a", 5) != substream_seed(1, "a", 5));
}
