#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace slt {

// splitmix64, used only for mixing seed material into substream seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Counter-style substream id: hash(master seed, purpose tag, index).
/// Replicates derive their generators from this, so results do not
/// depend on thread scheduling.
inline std::uint64_t substream_seed(std::uint64_t master, std::string_view tag,
                                    std::uint64_t index) {
  return mix64(mix64(master ^ fnv1a(tag)) + index);
}

// Thin wrapper around mt19937_64 with explicit inverse-CDF draws, so
// that a given seed produces the same sample path everywhere.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  double uniform() {
    // in (0,1), never exactly 0 or 1
    return (static_cast<double>(gen_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate = 1.0) {
    if (rate <= 0.0) throw std::invalid_argument("exponential: rate <= 0");
    return -std::log(uniform()) / rate;
  }

  bool bernoulli(double p) { return uniform() < p; }

  /// Geometric on {1,2,...} with success probability q.
  long geometric(double q) {
    if (q <= 0.0 || q > 1.0) throw std::invalid_argument("geometric: q out of (0,1]");
    if (q == 1.0) return 1;
    return 1 + static_cast<long>(std::floor(std::log(uniform()) / std::log1p(-q)));
  }

  /// Index draw from unnormalized nonnegative weights (linear scan).
  std::size_t discrete(const std::vector<double>& w) {
    double total = 0.0;
    for (double v : w) total += v;
    if (total <= 0.0) throw std::invalid_argument("discrete: all-zero weights");
    double u = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      acc += w[i];
      if (u < acc) return i;
    }
    return w.size() - 1;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace slt
