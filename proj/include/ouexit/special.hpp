#pragma once

// Small numeric helpers shared across modules: log-space arithmetic and the
// regularized upper incomplete gamma function (jump-law tail probabilities).

#include <cmath>
#include <limits>

#include "ouexit/errors.hpp"

namespace ouexit {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// log(e^a + e^b) without overflow; tolerates -inf operands.
inline double log_add(double a, double b) {
  if (a == neg_inf) return b;
  if (b == neg_inf) return a;
  const double hi = a > b ? a : b;
  const double lo = a > b ? b : a;
  return hi + std::log1p(std::exp(lo - hi));
}

// log(e^x - 1), accurate for the whole range x > 0.
inline double log_expm1(double x) {
  if (x <= 0) return x == 0 ? neg_inf : std::numeric_limits<double>::quiet_NaN();
  if (x > 36) return x;                  // e^x - 1 == e^x to double precision
  if (x > 1e-8) return std::log(std::expm1(x));
  return std::log(x) + x / 2;            // log(x(1 + x/2 + ...))
}

namespace detail {

inline double gamma_q_series(double a, double x) {
  // Regularized lower series, returned as its complement.
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
  }
  const double p = sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  return 1.0 - p;
}

inline double gamma_q_contfrac(double a, double x) {
  // Lentz continued fraction for the upper function.
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

// Regularized upper incomplete gamma Q(a, x) = Gamma(a, x) / Gamma(a).
inline double gamma_q(double a, double x) {
  if (a <= 0) throw DomainError("gamma_q: shape must be positive");
  if (x < 0) throw DomainError("gamma_q: argument must be nonnegative");
  if (x == 0) return 1.0;
  return x < a + 1.0 ? detail::gamma_q_series(a, x) : detail::gamma_q_contfrac(a, x);
}

}  // namespace ouexit
