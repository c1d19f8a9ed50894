#pragma once

// Tanh-sinh (double-exponential) quadrature over a finite interval, built for
// integrands with power-law endpoint singularities u^{mu-1} and
// (upper-u)^{p-1}, p possibly close to 0.
//
// Integrands are supplied in log space. A LogIntegrand is called as
//
//     double log_f(double u, double log_dlo, double log_dhi)
//
// where log_dlo = log(u - lower) and log_dhi = log(upper - u) are exact even
// where the distances themselves underflow; endpoint powers must be computed
// from these. Accumulation is log-shifted per panel, so integrands with
// exponents up to ~u*700 do not overflow. Node sets are fixed per level and
// summation order is fixed, so results are bit-reproducible.

#include <cmath>
#include <string>

#include "ouexit/errors.hpp"
#include "ouexit/special.hpp"

namespace ouexit {

struct QuadratureConfig {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  int max_levels = 12;      // trapezoid halvings of the tanh-sinh step
  double split_point = 0.5; // interior split, as a fraction of (upper - lower)
  double divergence_threshold = 1e12; // boundary-limit mode only

  void validate() const {
    if (!(abs_tol > 0) || !(rel_tol > 0))
      throw DomainError("QuadratureConfig: tolerances must be positive");
    if (max_levels < 3) throw DomainError("QuadratureConfig: max_levels must be >= 3");
    if (!(split_point > 0 && split_point < 1))
      throw DomainError("QuadratureConfig: split_point must be in (0,1)");
  }
};

struct QuadratureResult {
  double value = 0;              // exp(log_scale) * scaled_value; inf if too large
  double abs_error_estimate = 0;
  long nodes_used = 0;
  double log_scale = neg_inf;    // shift s
  double scaled_value = 0;       // value * e^{-s}
  bool converged = false;

  double log_value() const {
    if (scaled_value <= 0) return neg_inf;
    return log_scale + std::log(scaled_value);
  }
};

namespace detail {

enum class QuadMode { Singular, BoundaryLimit };

// Running sum of positive terms supplied as logs, kept as e^{scale} * sum.
struct ScaledSum {
  double scale = neg_inf;
  double sum = 0;

  void add(double log_term) {
    if (log_term == neg_inf) return;
    if (log_term <= scale) {
      sum += std::exp(log_term - scale);
    } else {
      sum = sum * std::exp(scale - log_term) + 1.0;
      scale = log_term;
    }
  }
  double log_total() const { return sum <= 0 ? neg_inf : scale + std::log(sum); }
};

constexpr double kHalfPi = 1.5707963267948966;
constexpr double kLn2 = 0.6931471805599453;
// Terms below max_term * e^{-40} are negligible against the running sum.
constexpr double kLogNegligible = -40.0;
constexpr double kTHardCap = 60.0; // log-distances down to ~-1e26 stay exact

inline double log_cosh(double x) {
  x = std::fabs(x);
  return x + std::log1p(std::exp(-2 * x)) - kLn2;
}

// One tanh-sinh panel over (a, b). off_lo/off_hi are the distances from the
// panel ends to the global interval ends (zero when this panel touches them);
// the integrand always receives distances to the global endpoints. Returns an
// unconverged result rather than throwing, so a caller can combine panels.
template <class LogF>
QuadratureResult tanh_sinh_panel(LogF&& log_f, double a, double b, double off_lo,
                                 double off_hi, const QuadratureConfig& cfg,
                                 QuadMode mode, double panel_abs_tol,
                                 double panel_rel_tol) {
  QuadratureResult res;
  if (!(b > a)) return res;

  const double r = 0.5 * (b - a);
  const double log_2r = std::log(2 * r);
  const double log_off_lo = off_lo > 0 ? std::log(off_lo) : neg_inf;
  const double log_off_hi = off_hi > 0 ? std::log(off_hi) : neg_inf;
  const double log_div_threshold = std::log(cfg.divergence_threshold);

  ScaledSum acc;
  double max_log_term = neg_inf;
  bool range_exhausted = false;

  auto eval_node = [&](double t) -> double {
    const double g = kHalfPi * std::sinh(t);
    const double ag = std::fabs(g);
    const double l1pe = std::log1p(std::exp(-2 * ag));
    const double log_d_near = log_2r - 2 * ag - l1pe;
    const double log_d_far = log_2r - l1pe;
    double u, log_dlo, log_dhi;
    if (t >= 0) { // near the upper panel end
      u = b - std::exp(log_d_near);
      log_dlo = log_d_far;
      log_dhi = log_d_near;
    } else {
      u = a + std::exp(log_d_near);
      log_dlo = log_d_near;
      log_dhi = log_d_far;
    }
    if (off_lo > 0) log_dlo = log_add(log_dlo, log_off_lo);
    if (off_hi > 0) log_dhi = log_add(log_dhi, log_off_hi);

    const double log_w = std::log(r * kHalfPi) + log_cosh(t) - 2 * log_cosh(g);
    const double lf = log_f(u, log_dlo, log_dhi);
    ++res.nodes_used;
    if (std::isnan(lf)) throw DomainError("quadrature: integrand returned NaN");
    if (std::isinf(lf) && lf > 0) {
      if (mode == QuadMode::BoundaryLimit)
        throw Divergent("quadrature: integrand is +inf near the open endpoint");
      throw DomainError("quadrature: integrand returned +inf");
    }
    return log_w + lf;
  };

  // Sweep one side at step h from node index k0 stepping `stride`. `reach`
  // is the largest |t| where a non-negligible term has been seen on this
  // side; termination is allowed only beyond it, so refinements cannot stop
  // in a low-mass region before re-crossing the integrand's peak.
  auto sweep_side = [&](double h, long k0, long stride, int sign, double& reach) {
    int negligible_run = 0;
    for (long k = k0;; k += stride) {
      const double t = sign * static_cast<double>(k) * h;
      const double at = std::fabs(t);
      if (at > kTHardCap) {
        if (mode == QuadMode::BoundaryLimit)
          throw Divergent("quadrature: integrand tail does not decay at the open endpoint");
        range_exhausted = true;
        return;
      }
      const double log_term = eval_node(t);
      acc.add(log_term);
      if (log_term > max_log_term) max_log_term = log_term;
      if (mode == QuadMode::BoundaryLimit &&
          std::log(h) + acc.log_total() > log_div_threshold)
        throw Divergent("quadrature: integral exceeds divergence threshold");
      const bool negligible =
          log_term == neg_inf || log_term < max_log_term + kLogNegligible;
      if (!negligible) {
        if (at > reach) reach = at;
        negligible_run = 0;
        continue;
      }
      if (at <= reach) continue;
      if (++negligible_run >= 2) return;
    }
  };

  double reach_pos = 0, reach_neg = 0;
  double log_I_prev = std::numeric_limits<double>::quiet_NaN();
  double log_err = INFINITY;
  int levels_within_tol = 0; // a single small level diff can be a fluke
  int level = 0;
  for (; level <= cfg.max_levels; ++level) {
    const double h = std::ldexp(1.0, -level);
    if (level == 0) {
      acc.add(eval_node(0.0));
      max_log_term = acc.log_total();
      sweep_side(h, 1, 1, +1, reach_pos);
      sweep_side(h, 1, 1, -1, reach_neg);
    } else {
      sweep_side(h, 1, 2, +1, reach_pos); // odd multiples only
      sweep_side(h, 1, 2, -1, reach_neg);
    }
    if (range_exhausted) break;
    const double log_I = std::log(h) + acc.log_total();
    if (level >= 2) {
      if (log_I == neg_inf && log_I_prev == neg_inf) {
        log_err = neg_inf;
      } else {
        const double hi = std::fmax(log_I, log_I_prev);
        const double dl = std::fabs(log_I - log_I_prev);
        log_err = dl == 0 ? neg_inf : hi + std::log(-std::expm1(-dl));
      }
      const double tol_log = std::fmax(std::log(panel_abs_tol),
                                       std::log(panel_rel_tol) + log_I);
      levels_within_tol = log_err <= tol_log ? levels_within_tol + 1 : 0;
      if (levels_within_tol >= 2) {
        res.converged = true;
        break;
      }
    }
    log_I_prev = log_I;
  }

  const double h_final = std::ldexp(1.0, -std::min(level, cfg.max_levels));
  res.log_scale = acc.scale;
  res.scaled_value = acc.sum * h_final;
  res.value = std::exp(res.log_scale) * res.scaled_value;
  res.abs_error_estimate =
      range_exhausted ? INFINITY : (log_err == neg_inf ? 0.0 : std::exp(log_err));
  return res;
}

inline QuadratureResult combine_panels(const QuadratureResult& l,
                                       const QuadratureResult& r) {
  QuadratureResult res;
  res.nodes_used = l.nodes_used + r.nodes_used;
  res.converged = l.converged && r.converged;
  res.abs_error_estimate = l.abs_error_estimate + r.abs_error_estimate;
  res.log_scale = std::fmax(l.log_scale, r.log_scale);
  if (res.log_scale == neg_inf) return res;
  const double ll = l.log_value(), lr = r.log_value();
  res.scaled_value = (ll == neg_inf ? 0.0 : std::exp(ll - res.log_scale)) +
                     (lr == neg_inf ? 0.0 : std::exp(lr - res.log_scale));
  res.value = std::exp(res.log_scale) * res.scaled_value;
  return res;
}

template <class LogF>
QuadratureResult integrate_impl(LogF&& log_f, double lower, double upper,
                                const QuadratureConfig& cfg, QuadMode mode) {
  cfg.validate();
  if (!(lower < upper)) {
    if (lower == upper) return QuadratureResult{.converged = true};
    throw DomainError("quadrature: lower must be < upper");
  }
  // Half tolerances per panel keep the combined error estimate within the
  // declared bound max(abs_tol, rel_tol * |value|) for positive integrands.
  const double mid = lower + cfg.split_point * (upper - lower);
  const double half_abs = 0.5 * cfg.abs_tol;
  const double half_rel = 0.5 * cfg.rel_tol;
  auto left =
      tanh_sinh_panel(log_f, lower, mid, 0.0, upper - mid, cfg, mode, half_abs, half_rel);
  auto right =
      tanh_sinh_panel(log_f, mid, upper, mid - lower, 0.0, cfg, mode, half_abs, half_rel);
  auto res = combine_panels(left, right);
  if (!res.converged)
    throw NonConvergence("quadrature: tolerance not reached at max_levels", res.value,
                         res.abs_error_estimate);
  return res;
}

}  // namespace detail

// Integral over (lower, upper) of a positive integrand with at worst
// integrable power singularities at the endpoints. Throws NonConvergence
// (carrying the partial value) or DomainError.
template <class LogF>
QuadratureResult integrate_singular(LogF&& log_f, double lower, double upper,
                                    const QuadratureConfig& cfg = {}) {
  return detail::integrate_impl(log_f, lower, upper, cfg, detail::QuadMode::Singular);
}

// Improper integral with an open upper endpoint where the integrand may blow
// up. Converges iff the integral is finite; throws Divergent when the running
// value crosses cfg.divergence_threshold or the tail never decays.
template <class LogF>
QuadratureResult integrate_to_boundary_limit(LogF&& log_f, double lower, double upper,
                                             const QuadratureConfig& cfg = {}) {
  return detail::integrate_impl(log_f, lower, upper, cfg, detail::QuadMode::BoundaryLimit);
}

}  // namespace ouexit
