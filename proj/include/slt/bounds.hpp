#pragma once

#include <cstddef>

namespace slt {

/// Configurable inputs for the closed-form bound evaluators. The
/// universal constants carry no known numeric value; they default to 1
/// and are printed alongside every report.
struct BoundInputs {
  double eps = 0.1;
  double eps0 = 0.5;
  double beta = 0.0;
  double phi = 2.0;
  double kappa = 2.0;
  double gamma = 1.0;
  double c4 = 1.0;
  double c5 = 1.0;

  double q() const { return 1.0 - eps; }
  double q0() const { return 1.0 - eps0; }
  void validate() const;
};

/// The square-root factor of the main TV bound, and eps * factor
/// (the bound with the unknown multiplier K left as a slot).
struct TvBoundFactor {
  double factor;
  double bound;  // eps * factor
};
TvBoundFactor tv_bound_factor(const BoundInputs& in);

/// F = C4 * eps * factor.
double f_value(const BoundInputs& in);

/// L2 norm of the block envelope: sqrt(2) * eps / q.
double envelope_norm(double eps, double q);

/// Bracketing-number bound phi 2^beta (sqrt(2) kappa / (q s ||E||_2))^{beta/gamma}.
double bracketing_bound(double s, const BoundInputs& in, double env_norm);

/// Binomial lower-tail rate I(p, delta); P[Bin(m,p) <= (1-delta) m p]
/// <= exp(-m I).
double binom_lower_tail_rate(double p, double delta);

/// Three-term tail bound on P[R_n >= 8 F sqrt(n) + 7 theta n].
double concentration_tail(double theta, std::size_t n, const BoundInputs& in,
                          double F);

}  // namespace slt
