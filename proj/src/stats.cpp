#include "slt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace slt {

namespace {

// series expansion of P(a, x), valid for x < a + 1
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// continued fraction for Q(a, x), valid for x >= a + 1
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi2_sf(double x, double k) { return gamma_q(0.5 * k, 0.5 * x); }

double kolmogorov_sf(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double term = 2.0 * std::pow(-1.0, k - 1) *
                  std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-12) break;
  }
  return std::clamp(sum, 0.0, 1.0);
}

TestResult ks_exponential(std::vector<double> samples) {
  const std::size_t n = samples.size();
  if (n < 100) throw std::invalid_argument("ks_exponential: need >= 100 samples");
  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double cdf = 1.0 - std::exp(-samples[i]);
    double lo = static_cast<double>(i) / n;
    double hi = static_cast<double>(i + 1) / n;
    d = std::max({d, std::abs(cdf - lo), std::abs(cdf - hi)});
  }
  double sn = std::sqrt(static_cast<double>(n));
  double lambda = (sn + 0.12 + 0.11 / sn) * d;
  return {d, kolmogorov_sf(lambda)};
}

TestResult chi_square_vs_probs(const std::vector<long>& observed,
                               const std::vector<double>& probs) {
  if (observed.size() != probs.size())
    throw std::invalid_argument("chi_square: size mismatch");
  long total = 0;
  for (long o : observed) total += o;
  if (total <= 0) throw std::invalid_argument("chi_square: no observations");

  // pool low-expectation cells (< 5 expected) into one tail cell
  std::vector<double> exp_cells;
  std::vector<double> obs_cells;
  double pooled_exp = 0.0;
  double pooled_obs = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    double e = probs[i] * static_cast<double>(total);
    if (e < 5.0) {
      pooled_exp += e;
      pooled_obs += static_cast<double>(observed[i]);
    } else {
      exp_cells.push_back(e);
      obs_cells.push_back(static_cast<double>(observed[i]));
    }
  }
  if (pooled_exp > 0.0) {
    if (pooled_exp >= 5.0 || exp_cells.empty()) {
      exp_cells.push_back(pooled_exp);
      obs_cells.push_back(pooled_obs);
    } else {
      // still under the threshold: merge into the smallest retained cell
      std::size_t j = 0;
      for (std::size_t i = 1; i < exp_cells.size(); ++i)
        if (exp_cells[i] < exp_cells[j]) j = i;
      exp_cells[j] += pooled_exp;
      obs_cells[j] += pooled_obs;
    }
  }
  if (exp_cells.size() < 2)
    throw std::invalid_argument("chi_square: all cells merged away");
  double stat = 0.0;
  for (std::size_t i = 0; i < exp_cells.size(); ++i) {
    double diff = obs_cells[i] - exp_cells[i];
    stat += diff * diff / exp_cells[i];
  }
  return {stat, chi2_sf(stat, static_cast<double>(exp_cells.size() - 1))};
}

TestResult chi_square_vs_dist(const std::vector<long>& observed,
                              const CountDistribution& exact) {
  return chi_square_vs_probs(observed, exact.probs);
}

std::pair<double, double> wilson_interval(std::size_t successes,
                                          std::size_t trials) {
  if (trials == 0) throw std::invalid_argument("wilson_interval: no trials");
  const double z = 1.959963984540054;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half =
      z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace slt
