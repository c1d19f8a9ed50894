#pragma once

// Closed-form exit-time quantities for the first passage of level b:
// the transform G(z, mu), the Laplace transform of tau_b and its mean for
// exponential positive jumps, the large-b asymptotic of the mean, and the
// per-path integrals used to test the martingale and mean identities.

#include <optional>

#include "ouexit/levy_model.hpp"
#include "ouexit/phi_kernel.hpp"
#include "ouexit/quadrature.hpp"

namespace ouexit {

struct ExitProblem {
  double x = 0; // start level X_0
  double b = 0; // barrier; b > x for simulation, b == x allowed for diagnostics
  LevyModel model;

  void validate() const {
    model.validate();
    if (!std::isfinite(x) || !std::isfinite(b)) throw DomainError("x/b: must be finite");
    if (!(b >= x)) throw DomainError("b: must be >= x");
  }
};

struct LaplaceValue {
  double mu = 0;
  double value = 0; // E e^{-mu beta tau_b}, in (0, 1]
  QuadratureResult numerator;
  QuadratureResult denominator;
};

struct AsymptoticMean {
  double value = 0;     // may overflow to inf for large K*b
  double log_value = 0; // always finite
};

class ExitAnalytics {
 public:
  explicit ExitAnalytics(ExitProblem problem, QuadratureConfig cfg = {});

  const ExitProblem& problem() const { return prob_; }
  const PhiEvaluator& phi() const { return phi_; }

  // G(z, mu) = int_0^K e^{u z - phi(u)} u^{mu-1} du, any built-in model.
  double g_function(double z, double mu) const;

  // E e^{-mu beta tau_b}; requires exponential positive jumps. The numerator
  // and denominator are formed from the same integrand family, so the ratio
  // is computed in log space and never overflows. Below mu beta E tau = 1e-4
  // the first-order expansion in mu replaces the integral ratio.
  LaplaceValue laplace_exit(double mu) const;

  // E tau_b; requires exponential positive jumps.
  double mean_exit() const;

  // int_0^K (e^{u*exit_value} - e^{u x}) e^{-phi(u)} u^{-1} du for one realized
  // exit value; averaging over paths must reproduce beta * E tau_b.
  double mean_identity_integral(double exit_value) const;

  // e^{-mu beta exit_time} G(exit_value, mu); averaging over paths must
  // reproduce G(x, mu).
  double martingale_weight(double exit_value, double exit_time, double mu) const;

  // E tau_b ~ C e^{K b} (K b)^{-lambda/beta}, C = Gamma(lambda/beta)/(beta K)
  // * e^{-Delta(K)}, for b -> infinity.
  AsymptoticMean asymptotic_mean() const;

  // E e^{-z tau_b / E tau_b}, i.e. the Laplace transform at mu scaled by the
  // mean; tends to 1/(1+z) as b grows.
  double limit_laplace(double z) const;

 private:
  void require_exponential_jumps(const char* what) const;

  ExitProblem prob_;
  QuadratureConfig cfg_;
  PhiEvaluator phi_;
  double lam_over_beta_;
  mutable std::optional<double> mean_cache_;
};

}  // namespace ouexit
