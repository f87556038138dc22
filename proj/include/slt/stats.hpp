#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "slt/oracle.hpp"

namespace slt {

struct TestResult {
  double statistic;
  double p_value;
};

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Survival function of the chi-square law with k degrees of freedom.
double chi2_sf(double x, double k);

/// Asymptotic Kolmogorov distribution tail Q(lambda).
double kolmogorov_sf(double lambda);

/// One-sample KS test of `samples` against Exp(1).
TestResult ks_exponential(std::vector<double> samples);

/// Pearson chi-square of observed counts against an exact law.
/// Cells with expected count < 5 are pooled into one tail cell;
/// dof = retained cells - 1.
TestResult chi_square_vs_dist(const std::vector<long>& observed,
                              const CountDistribution& exact);

/// Same, with the empirical data given as per-replicate support indices.
TestResult chi_square_vs_probs(const std::vector<long>& observed,
                               const std::vector<double>& probs);

/// Wilson score interval for a proportion at z = 1.96.
std::pair<double, double> wilson_interval(std::size_t successes,
                                          std::size_t trials);

}  // namespace slt
