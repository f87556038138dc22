#include "slt/binproc.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace slt {

double composition_count(std::size_t n, std::size_t k) {
  if (k == 0) return n == 0 ? 1.0 : 0.0;
  double c = 1.0;
  for (std::size_t i = 1; i < k; ++i) {
    c *= static_cast<double>(n + i) / static_cast<double>(i);
    if (c > 1e18) return 1e18;
  }
  return c;
}

std::vector<std::vector<long>> enumerate_compositions(std::size_t n,
                                                      std::size_t k) {
  std::vector<std::vector<long>> out;
  std::vector<long> cur(k, 0);
  // recursive lexicographic fill
  auto rec = [&](auto&& self, std::size_t pos, long rem) -> void {
    if (pos + 1 == k) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (long v = 0; v <= rem; ++v) {
      cur[pos] = v;
      self(self, pos + 1, rem - v);
    }
  };
  if (k > 0) rec(rec, 0, static_cast<long>(n));
  return out;
}

double log_factorial(long n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(20001, 0.0);
    for (long i = 1; i < static_cast<long>(t.size()); ++i)
      t[i] = t[i - 1] + std::log(static_cast<double>(i));
    return t;
  }();
  if (n < 0) throw std::invalid_argument("log_factorial: negative argument");
  if (n < static_cast<long>(table.size())) return table[n];
  return std::lgamma(static_cast<double>(n) + 1.0);
}

double multinomial_log_pmf(const std::vector<long>& counts,
                           const std::vector<double>& base) {
  long n = 0;
  double lp = 0.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    n += counts[i];
    if (counts[i] > 0) {
      if (base[i] <= 0.0) return -std::numeric_limits<double>::infinity();
      lp += counts[i] * std::log(base[i]) - log_factorial(counts[i]);
    }
  }
  return lp + log_factorial(n);
}

double rn_product(const std::vector<std::size_t>& points,
                  const std::vector<double>& p, const std::vector<double>& q) {
  double prod = 1.0;
  for (std::size_t x : points) {
    if (p[x] <= 0.0)
      throw std::invalid_argument("rn_product: zero base mass under p");
    prod *= q[x] / p[x];
  }
  return prod;
}

double exact_tv_binomial(const std::vector<double>& p,
                         const std::vector<double>& q, std::size_t n,
                         double cap) {
  if (p.size() != q.size() || p.empty())
    throw std::invalid_argument("exact_tv_binomial: base size mismatch");
  if (composition_count(n, p.size()) > cap)
    throw std::invalid_argument("exact_tv_binomial: composition cap exceeded");
  double tv = 0.0;
  for (const auto& c : enumerate_compositions(n, p.size())) {
    double pp = std::exp(multinomial_log_pmf(c, p));
    double pq = std::exp(multinomial_log_pmf(c, q));
    tv += std::abs(pp - pq);
  }
  return 0.5 * tv;
}

double binomial_tv_linear_bound(double delta, double delta0) {
  if (delta0 <= 0.0 || delta0 > 1.0)
    throw std::invalid_argument("binomial_tv_linear_bound: delta0 outside (0,1]");
  if (delta < 0.0 || delta >= delta0)
    throw std::invalid_argument("binomial_tv_linear_bound: need 0 <= delta < delta0");
  const double d2 = delta0 * delta0;
  const double c1 = std::exp(d2) * std::sinh(d2) / delta0 +
                    std::sqrt(2.0 * M_PI) * std::exp(2.5 * d2);
  return c1 * delta;
}

}  // namespace slt
