#pragma once

#include <cstddef>
#include <vector>

namespace slt {

/// Number of compositions of n into k nonnegative parts, C(n+k-1, k-1).
/// Saturates at the cap-ish range of double; callers compare to caps.
double composition_count(std::size_t n, std::size_t k);

/// All compositions of n into k parts, lexicographic.
std::vector<std::vector<long>> enumerate_compositions(std::size_t n,
                                                      std::size_t k);

/// log n! via a cumulative table (lgamma-backed beyond the table).
double log_factorial(long n);

/// log of the Multinomial(n, base) probability of a count vector.
double multinomial_log_pmf(const std::vector<long>& counts,
                           const std::vector<double>& base);

/// Product of q(x)/p(x) over a multiset of points (Radon-Nikodym
/// derivative of one n-point process w.r.t. the other).
double rn_product(const std::vector<std::size_t>& points,
                  const std::vector<double>& p, const std::vector<double>& q);

/// Exact total variation between the binomial point processes with n
/// points and bases p, q, by enumeration of count vectors.
double exact_tv_binomial(const std::vector<double>& p,
                         const std::vector<double>& q, std::size_t n,
                         double cap = 2e6);

/// C1(delta0) * delta with C1 = exp(d0^2) sinh(d0^2)/d0 + sqrt(2 pi) exp(2.5 d0^2).
double binomial_tv_linear_bound(double delta, double delta0);

}  // namespace slt
