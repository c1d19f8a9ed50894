#pragma once

// Real-axis Laplace inversion (Gaver-Stehfest) of the exit-time survival
// function P(tau_b > t), via the distribution-function transform
// E e^{-s tau_b} / s. The Stehfest weights are assembled in double-double
// arithmetic (~32 decimal digits), since the alternating sum amplifies weight
// rounding; the transform evaluations themselves stay in double precision,
// which bounds the achievable accuracy near 1e-5 at the default 16 terms.

#include <functional>
#include <vector>

#include "ouexit/exit_analytics.hpp"

namespace ouexit {

struct InversionConfig {
  int terms = 16;                     // even, in [4, 32]
  int working_precision_digits = 30;  // weight precision floor (double-double)

  void validate() const {
    if (terms < 4 || terms > 32 || terms % 2 != 0)
      throw DomainError("InversionConfig: terms must be even and in [4, 32]");
    if (working_precision_digits > 32)
      throw DomainError("InversionConfig: weights carry at most 32 digits");
  }
};

struct SurvivalPoint {
  double t = 0;
  double value = 0;        // clamped to [0, 1]
  double err_estimate = 0; // |terms vs terms+4| disagreement
  bool precision_loss = false;
};

// Stehfest weights V_1..V_n (n even), computed in double-double.
std::vector<double> stehfest_weights(int n);

// f(t) ~= (ln 2 / t) * sum_k V_k F(k ln 2 / t).
double gaver_stehfest(const std::function<double(double)>& transform, double t,
                      int terms);

// P(tau_b > t). Requires exponential positive jumps (the transform formula).
// precision_loss is set when the self-check disagrees by more than 1e-3 or the
// raw value leaves [-0.01, 1.01]; accuracy degrades far in the tail.
SurvivalPoint survival(const ExitAnalytics& analytics, double t,
                       const InversionConfig& cfg = {});

}  // namespace ouexit
