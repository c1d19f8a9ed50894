#pragma once

// Path simulation of X_t = x - beta int_0^t X_s ds + L_t up to the first
// passage of b, and the Monte Carlo checks of the martingale identity, the
// mean identity, the explicit Laplace transform, the overshoot law, and the
// exponential limit of tau_b / E tau_b.
//
// Two modes. PureJumpExact (sigma = 0): the path follows the ODE exactly
// between jump epochs, so exit samples carry no discretization bias and can
// serve as an oracle. DiffusionEuler: exact OU transitions on a fixed step
// with jumps placed at their exact epochs; an optional Brownian-bridge
// correction samples intra-step crossings (residual bias O(dt) without it).

#include <cstdint>
#include <string>
#include <vector>

#include "ouexit/exit_analytics.hpp"
#include "ouexit/rng.hpp"
#include "ouexit/stats.hpp"

namespace ouexit {

enum class SimMode { PureJumpExact, DiffusionEuler };

struct SimConfig {
  long n_paths = 10000;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::PureJumpExact;
  double dt = 1e-3;            // DiffusionEuler step
  double t_max = 0;            // <= 0: auto (50x the analytic mean when the
                               // Laplace formula applies, else 50x a pilot mean)
  bool bridge_correction = true;
  int workers = 1;             // path fan-out; results do not depend on it
  bool suppress_jumps = false; // diagnostic: deterministic ODE flow only

  void validate() const {
    if (n_paths < 1) throw DomainError("n_paths: must be >= 1");
    if (!(dt > 0)) throw DomainError("dt: must be positive");
    if (workers < 1) throw DomainError("workers: must be >= 1");
  }
};

struct ExitSample {
  double tau = 0;
  double exit_value = 0; // >= b when not censored; state at t_max otherwise
  double overshoot = 0;  // exit_value - b, 0 for censored paths
  bool censored = false;
  long n_jumps = 0;
};

// Quadrature preset for the per-path integrals of the Monte Carlo identity
// checks: the integration error only has to sit far below the MC standard
// error, and the relaxed tolerance saves two refinement levels per path.
inline QuadratureConfig mc_check_quadrature() {
  QuadratureConfig q;
  q.abs_tol = 1e-8;
  q.rel_tol = 1e-6;
  return q;
}

// Exact one-step OU transition mean/noise, exposed for direct testing.
double ou_decay(double x, double m, double beta, double dt);
double ou_exact_step(double x, double m, double beta, double sigma, double dt, double z);
// Time at which the deterministic flow from x reaches b (requires m > b > x).
double deterministic_crossing_time(double x, double m, double beta, double b);

std::vector<ExitSample> simulate_exit(const ExitProblem& problem, const SimConfig& cfg);

double censored_fraction(const std::vector<ExitSample>& samples);

// Mean and std error of e^{-mu beta tau}. Censored samples are an error: an
// imputed e^{-mu beta t_max} would bias the estimate upward.
McEstimate estimate_laplace(const std::vector<ExitSample>& samples, double mu,
                            double beta);

// Mean and std error of tau. Censored samples are an error.
McEstimate estimate_mean_exit(const std::vector<ExitSample>& samples);

struct IdentityCheck {
  std::string name;
  double lhs_mean = 0, lhs_se = 0; // Monte Carlo side
  double rhs_mean = 0, rhs_se = 0; // reference side (se 0 when analytic)
  double z = 0;
  long n = 0;
  bool pass = false; // |z| < 3
};

// MC mean of e^{-mu beta tau} G(X_tau, mu) against G(x, mu). Throws
// NotApplicable when phi(K) is finite (Gamma shape < 1). The per-path
// integrals are independent; `workers` fans them out without changing any
// value.
IdentityCheck check_martingale_identity(const ExitAnalytics& analytics,
                                        const std::vector<ExitSample>& samples,
                                        double mu, int workers = 1);

// MC mean of the per-path integral against beta * (MC mean of tau); the
// z-score comes from the paired per-path differences.
IdentityCheck check_mean_identity(const ExitAnalytics& analytics,
                                  const std::vector<ExitSample>& samples,
                                  int workers = 1);

// MC mean of e^{-mu beta tau} against the explicit Laplace transform
// (exponential positive jumps only).
IdentityCheck check_laplace_formula(const ExitAnalytics& analytics,
                                    const std::vector<ExitSample>& samples, double mu);

struct OvershootReport {
  long n = 0;
  double ks_stat = 0, ks_threshold = 0;
  bool ks_pass = false;
  double corr = 0, corr_threshold = 0;
  bool corr_pass = false;
  double mean_overshoot = 0, mean_se = 0, expected_mean = 0;
  bool mean_pass = false;
  bool pass = false;
};

// Overshoot law checks for exponential positive jumps of rate K: KS against
// the Exponential(K) CDF at alpha ~ 0.01, independence of (overshoot, tau) via
// the sample correlation, and the overshoot mean against 1/K.
OvershootReport overshoot_tests(const std::vector<ExitSample>& samples, double K);

struct LimitTheoremReport {
  std::vector<double> b_grid;
  std::vector<double> ks_distance; // tau/mean(tau) vs the unit exponential
  bool decreasing = false;
  double p_exceed_mean_last = 0;   // empirical P(tau > mean) at the last b
};

LimitTheoremReport check_limit_theorem(const ExitProblem& problem, const SimConfig& cfg,
                                       const std::vector<double>& b_grid);

}  // namespace ouexit
