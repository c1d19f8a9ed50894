#pragma once

// Test-only reference values, independent of the library's quadrature path:
// closed-form series and a plain composite Simpson rule for smooth integrands.

#include <cmath>
#include <functional>

namespace oracles {

// int_0^1 (e^{b u} - 1)/u du = sum_{k>=1} b^k / (k * k!)
inline double exp_minus_one_over_u(double b) {
  double sum = 0, term = 1;
  for (int k = 1; k <= 60; ++k) {
    term *= b / k; // b^k / k!
    sum += term / k;
  }
  return sum;
}

// int_0^1 (e^{b u} - 1)(1 - u)/u du = sum_{k>=1} b^k / (k! * k * (k+1))
inline double exp_minus_one_times_one_minus_u_over_u(double b) {
  double sum = 0, term = 1;
  for (int k = 1; k <= 60; ++k) {
    term *= b / k;
    sum += term / (k * (k + 1.0));
  }
  return sum;
}

// Ein(x) = int_0^x (1 - e^{-s})/s ds = sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
inline double ein(double x) {
  double sum = 0, term = 1;
  for (int k = 1; k <= 80; ++k) {
    term *= -x / k;
    sum -= term / k;
  }
  return sum;
}

// Composite Simpson for smooth integrands (no endpoint singularities).
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int panels = 4000) {
  const double h = (b - a) / panels;
  double acc = 0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h;
    const double x1 = x0 + h;
    acc += h / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  return acc;
}

}  // namespace oracles
