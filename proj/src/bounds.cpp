#include "slt/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace slt {

void BoundInputs::validate() const {
  if (eps <= 0.0 || eps > eps0 || eps0 >= 1.0)
    throw std::invalid_argument("BoundInputs: need 0 < eps <= eps0 < 1");
  if (gamma <= 0.0 || gamma > 1.0)
    throw std::invalid_argument("BoundInputs: gamma outside (0,1]");
  if (phi < 1.0) throw std::invalid_argument("BoundInputs: phi < 1");
  if (beta < 0.0) throw std::invalid_argument("BoundInputs: beta < 0");
  if (c4 <= 0.0 || c5 <= 0.0)
    throw std::invalid_argument("BoundInputs: constants must be positive");
}

TvBoundFactor tv_bound_factor(const BoundInputs& in) {
  in.validate();
  const double log_term =
      std::log(std::max(in.kappa, 2.0 * in.eps) / in.eps);
  const double radicand =
      1.0 + std::log(in.phi * std::pow(2.0, in.beta)) +
      (in.beta > 0.0 ? (in.beta / in.gamma) * log_term : 0.0);
  const double factor = std::sqrt(radicand);
  return {factor, in.eps * factor};
}

double f_value(const BoundInputs& in) {
  return in.c4 * tv_bound_factor(in).bound;
}

double envelope_norm(double eps, double q) {
  if (q <= 0.0) throw std::invalid_argument("envelope_norm: q <= 0");
  return std::sqrt(2.0) * eps / q;
}

double bracketing_bound(double s, const BoundInputs& in, double env_norm) {
  if (s <= 0.0) throw std::invalid_argument("bracketing_bound: s <= 0");
  const double base = std::sqrt(2.0) * in.kappa / (in.q() * s * env_norm);
  return in.phi * std::pow(2.0, in.beta) * std::pow(base, in.beta / in.gamma);
}

double binom_lower_tail_rate(double p, double delta) {
  if (p <= 0.0 || p >= 1.0)
    throw std::invalid_argument("binom_lower_tail_rate: p outside (0,1)");
  if (delta < 0.0 || delta >= 1.0)
    throw std::invalid_argument("binom_lower_tail_rate: delta outside [0,1)");
  if (delta == 0.0) return 0.0;
  return p * (1.0 - delta) * std::log(1.0 - delta) +
         p * ((1.0 - p) / p + delta) * std::log1p(delta * p / (1.0 - p));
}

double concentration_tail(double theta, std::size_t n, const BoundInputs& in,
                          double F) {
  if (theta <= 0.0) throw std::invalid_argument("concentration_tail: theta <= 0");
  in.validate();
  (void)F;  // F enters the event, not the right-hand side
  const double q = in.q();
  const double nn = static_cast<double>(n);
  const double t1 =
      2.0 * std::exp(-(3.0 / 8.0) * q * q * theta * theta * nn /
                     (in.eps * in.eps));
  const double t2 = 6.0 * std::exp(-3.0 * in.c5 * q * theta * nn /
                                   (in.eps * std::log(3.0 * nn + 1.0)));
  const double t3 = 2.0 * std::exp(-q * theta * nn / (2.0 * in.eps));
  return t1 + t2 + t3;
}

}  // namespace slt
