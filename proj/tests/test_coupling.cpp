#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <numeric>

#include "slt/binproc.hpp"
#include "slt/coupling.hpp"
#include "slt/model.hpp"
#include "slt/oracle.hpp"
#include "slt/stats.hpp"

using namespace slt;

TEST_CASE("psi from a hand-built trace") {
  // two sites pi = (1/2, 1/2); head xi sums to 2, tail to 1,
  // split curve (1.8, 2.2) gives Psi = (1.2, 0.8)
  SltTrace tr;
  tr.n = 2;
  tr.xi = {2.0, 1.0};
  tr.split = 1;
  tr.curve = {0.0, 0.0};
  tr.curve_at_split = {1.8, 2.2};
  PsiDensity psi = compute_psi(tr);
  CHECK(psi.values[0] == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(psi.values[1] == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(psi.sup_dev == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(psi.denominator == doctest::Approx(1.0).epsilon(1e-12));

  tr.split = 2;
  CHECK_THROWS_AS(compute_psi(tr), std::invalid_argument);
}

TEST_CASE("event classification") {
  PsiDensity psi;
  SUBCASE("zero deviation") {
    psi.sup_dev = 0.0;
    auto [b, in_g] = classify_event(psi, 0.4, 100);
    CHECK(b == 1);
    CHECK(in_g);  // 2 * 0.4 <= 1
    auto [b2, g2] = classify_event(psi, 0.6, 100);
    CHECK(b2 == 1);
    CHECK_FALSE(g2);  // 2 * 0.6 > 1
  }
  SUBCASE("sup_dev 0.2, F 0.05, n 100") {
    psi.sup_dev = 0.2;
    auto [b, in_g] = classify_event(psi, 0.05, 100);
    CHECK(b == 39);
    CHECK_FALSE(in_g);
  }
  SUBCASE("sup_dev 0.009, F 0.05, n 100") {
    psi.sup_dev = 0.009;
    auto [b, in_g] = classify_event(psi, 0.05, 100);
    CHECK(b == 1);
    CHECK(in_g);
  }
  SUBCASE("defining inequalities hold for scanned inputs") {
    for (double dev : {0.001, 0.01, 0.02, 0.3, 0.9}) {
      psi.sup_dev = dev;
      auto [b, in_g] = classify_event(psi, 0.07, 50);
      double scale = 0.07 / std::sqrt(50.0);
      CHECK(dev <= (1.0 + double(b)) * scale);
      if (b >= 2) CHECK(dev > double(b) * scale);
      CHECK(in_g == ((1.0 + double(b)) * 0.07 <= 1.0));
    }
  }
  SUBCASE("F must be positive") {
    psi.sup_dev = 0.1;
    CHECK_THROWS_AS(classify_event(psi, 0.0, 10), std::invalid_argument);
  }
}

TEST_CASE("maximal coupling of count vectors") {
  std::vector<double> pi = {0.5, 0.5};
  SUBCASE("identical laws always meet") {
    Rng rng(1);
    for (int t = 0; t < 200; ++t) {
      std::vector<long> v = {long(t % 3), long(2 - t % 3)};
      auto res = maximal_coupling_counts(2, pi, {1.0, 1.0}, v, 1e6, rng);
      CHECK(res.met);
      CHECK(res.v_prime_counts == v);
    }
  }
  SUBCASE("met frequency tracks 1 - TV at m = 2") {
    // Binomial(2,.5) vs Binomial(2,.6): TV = 0.11
    std::vector<double> tilted = {1.2, 0.8};
    Rng rng(2);
    std::size_t met = 0, reps = 20000;
    for (std::size_t t = 0; t < reps; ++t) {
      std::vector<long> v(2, 0);
      for (int j = 0; j < 2; ++j) ++v[rng.bernoulli(0.5) ? 0 : 1];
      auto res = maximal_coupling_counts(2, pi, tilted, v, 1e6, rng);
      if (res.met) ++met;
      long s = res.v_prime_counts[0] + res.v_prime_counts[1];
      CHECK(s == 2);
      if (res.met) CHECK(res.v_prime_counts == v);
    }
    double phat = double(met) / double(reps);
    double se = std::sqrt(0.89 * 0.11 / double(reps));
    CHECK(std::abs(phat - 0.89) <= 3.0 * se);
  }
  SUBCASE("marginal of V' is the tilted multinomial") {
    std::vector<double> tilted = {1.2, 0.8};
    Rng rng(3);
    std::size_t reps = 20000;
    std::vector<long> counts(3, 0);  // rank = count of site 0
    for (std::size_t t = 0; t < reps; ++t) {
      std::vector<long> v(2, 0);
      for (int j = 0; j < 2; ++j) ++v[rng.bernoulli(0.5) ? 0 : 1];
      auto res = maximal_coupling_counts(2, pi, tilted, v, 1e6, rng);
      ++counts[composition_rank(res.v_prime_counts)];
    }
    // compositions of 2 into 2 parts, lexicographic: (0,2),(1,1),(2,0)
    std::vector<double> expect = {0.16, 0.48, 0.36};
    CHECK(chi_square_vs_probs(counts, expect).p_value > 1e-3);
  }
  SUBCASE("cap violation raises") {
    Rng rng(4);
    std::vector<long> v = {1, 1};
    CHECK_THROWS_AS(maximal_coupling_counts(2, pi, {1.0, 1.0}, v, 1.0, rng),
                    std::invalid_argument);
  }
}

namespace {

// brute-force law of the permuted construction given its flags:
// enumerate site sequences, step kernels fixed by the schedule
CountDistribution brute_schedule_law(const TransitionModel& m,
                                     const RegenSchedule& sched) {
  const std::size_t k = m.size(), n = sched.I.size();
  CountDistribution out;
  out.support = enumerate_compositions(n, k);
  out.probs.assign(out.support.size(), 0.0);
  std::vector<std::size_t> seq(n, 0);
  while (true) {
    double p = m.nu[seq[0]] * m.space.pi[seq[0]];
    for (std::size_t i = 2; i <= n; ++i) {
      bool flat = i > sched.hc_size() ||
                  sched.I[sched.s_inverse(i) - 1] == 1;
      double g = flat ? 1.0 : m.mu[seq[i - 2]][seq[i - 1]];
      p *= g * m.space.pi[seq[i - 1]];
    }
    std::vector<long> field(k, 0);
    for (std::size_t s : seq) ++field[s];
    out.probs[composition_rank(field)] += p;
    std::size_t pos = 0;
    while (pos < n && ++seq[pos] == k) seq[pos++] = 0;
    if (pos == n) break;
  }
  return out;
}

}  // namespace

TEST_CASE("schedule-conditional law matches brute-force enumeration") {
  TransitionModel m = two_state_model(0.6);
  for (std::vector<int> flags : {std::vector<int>{1, 0, 1, 1, 1},
                                 std::vector<int>{1, 1, 0, 0, 1},
                                 std::vector<int>{1, 1, 1, 1, 1},
                                 std::vector<int>{1, 0, 1, 0, 1}}) {
    RegenSchedule sched = schedule_from_flags(flags);
    CountDistribution dp = schedule_conditional_law(m, sched, 1e6);
    CountDistribution bf = brute_schedule_law(m, sched);
    REQUIRE(dp.probs.size() == bf.probs.size());
    for (std::size_t r = 0; r < dp.probs.size(); ++r)
      CHECK(dp.probs[r] == doctest::Approx(bf.probs[r]).epsilon(1e-10));
  }
}

TEST_CASE("schedule-conditional laws mix to the chain field law") {
  TransitionModel m = two_state_model(0.6);
  const std::size_t n = 5;
  CountDistribution exact = chain_localtime_dist(m, n);
  std::vector<double> mix(exact.probs.size(), 0.0);
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<int> flags = {1, mask & 1, (mask >> 1) & 1, (mask >> 2) & 1,
                              (mask >> 3) & 1};
    double w = 1.0;
    for (std::size_t j = 1; j < n; ++j)
      w *= flags[j] ? m.q : 1.0 - m.q;
    CountDistribution law =
        schedule_conditional_law(m, schedule_from_flags(flags), 1e6);
    for (std::size_t r = 0; r < mix.size(); ++r) mix[r] += w * law.probs[r];
  }
  for (std::size_t r = 0; r < mix.size(); ++r)
    CHECK(mix[r] == doctest::Approx(exact.probs[r]).epsilon(1e-10));
}

TEST_CASE("flat model coupling succeeds whenever 2F <= 1") {
  std::vector<std::vector<double>> P = {{0.5, 0.5}, {0.5, 0.5}};
  TransitionModel m = validate_model(P);
  for (int r = 0; r < 200; ++r) {
    CouplingOutcome o = run_coupling(m, 20, 0.4, 1e6, 500 + r);
    if (o.degenerate) continue;  // |H| = 0, possible but rare at q = 1
    CHECK(o.b_index == 1);
    CHECK(o.in_G);
    CHECK(o.success);
    CHECK(o.L_tilde == o.L_prime);
  }
}

TEST_CASE("coupling outcomes conserve mass and normalize psi") {
  TransitionModel m = two_state_model(0.6);
  const std::size_t n = 30;
  for (int r = 0; r < 300; ++r) {
    CouplingOutcome o = run_coupling(m, n, 0.1, 1e6, 900 + r);
    long st = std::accumulate(o.L_tilde.begin(), o.L_tilde.end(), 0L);
    long sp = std::accumulate(o.L_prime.begin(), o.L_prime.end(), 0L);
    CHECK(st == long(n));
    CHECK(sp == long(n));
    if (!o.degenerate) {
      CHECK(o.b_index >= 1);
      CHECK(std::abs(o.psi_normalization - 1.0) <= 1e-9);
      CHECK(o.in_G == ((1.0 + double(o.b_index)) * 0.1 <= 1.0));
    }
    if (o.success) CHECK(o.L_tilde == o.L_prime);
  }
}

TEST_CASE("coupling marginals match the two exact laws") {
  TransitionModel m = two_state_model(0.6);
  const std::size_t n = 4, reps = 20000;
  CountDistribution chain = chain_localtime_dist(m, n);
  CountDistribution mn = multinomial_dist(n, m.space.pi);
  std::vector<long> ct(chain.support.size(), 0), cp(mn.support.size(), 0);
  for (std::size_t r = 0; r < reps; ++r) {
    CouplingOutcome o = run_coupling(m, n, 0.3, 1e6, 7000 + r);
    ++ct[composition_rank(o.L_tilde)];
    ++cp[composition_rank(o.L_prime)];
  }
  CHECK(chi_square_vs_dist(ct, chain).p_value > 1e-3);
  CHECK(chi_square_vs_dist(cp, mn).p_value > 1e-3);
}

TEST_CASE("failure rate upper-bounds the exact TV") {
  TransitionModel m = two_state_model(0.6);
  const std::size_t n = 4, reps = 20000;
  double tv = exact_tv_localtimes(m, n);
  std::size_t fail = 0;
  for (std::size_t r = 0; r < reps; ++r)
    if (!run_coupling(m, n, 0.3, 1e6, 8000 + r).success) ++fail;
  double phat = double(fail) / double(reps);
  double se = std::sqrt(phat * (1.0 - phat) / double(reps));
  CHECK(phat + 3.0 * se >= tv);
}
