#include "ouexit/phi_kernel.hpp"

#include <cmath>

namespace ouexit {

namespace {

// Cache key at 1e-14 granularity: integrals re-evaluate phi at identical
// nodes across outer quadratures.
long long cache_key(double u) { return std::llround(u * 1e14); }

// Switch to the v -> 0 limit of (E e^{v xi} - 1)/v below this point.
constexpr double kLimitSwitch = 1e-8;
const double kLogLimitSwitch = std::log(kLimitSwitch);

}  // namespace

PhiEvaluator::PhiEvaluator(LevyModel model, QuadratureConfig inner_cfg, bool cache_enabled)
    : model_(std::move(model)),
      cumulants_(build_cumulants(model_)),
      inner_cfg_(inner_cfg),
      cache_enabled_(cache_enabled) {
  inner_cfg_.validate();
  delta_closed_form_ =
      !model_.has_neg_jumps() || model_.neg_jumps->type == NegJumpType::Exponential;
  w_closed_form_ = model_.pos_jumps.type == PosJumpType::Exponential;
  lambda_over_beta_ = model_.pos_intensity / model_.beta;
  if (cache_enabled_ && !delta_closed_form_)
    delta_cache_ = std::make_unique<detail::NodeCache>();
  if (cache_enabled_ && !w_closed_form_)
    w_cache_ = std::make_unique<detail::NodeCache>();
}

double PhiEvaluator::delta(double u) const {
  const double K = cumulants_.K;
  if (!(u >= 0) || u > K) throw DomainError("delta: u must be in [0, K]");
  double val = (model_.drift * u +
                0.25 * model_.volatility * model_.volatility * u * u) /
               model_.beta;
  if (model_.has_neg_jumps()) {
    const double ln_over_beta = model_.neg_intensity / model_.beta;
    if (model_.neg_jumps->type == NegJumpType::Exponential) {
      val -= ln_over_beta * std::log1p(u / model_.neg_jumps->rate);
    } else {
      val -= ln_over_beta * delta_neg_const(u);
    }
  }
  return val;
}

// int_0^u (1 - e^{-v d})/v dv, the constant-size negative-jump component
// before its -neg_intensity/beta factor. Smooth, removable singularity at 0.
double PhiEvaluator::delta_neg_const(double u) const {
  if (u == 0) return 0;
  if (cache_enabled_) {
    double cached;
    if (delta_cache_->lookup(cache_key(u), cached)) return cached;
  }
  const double d = model_.neg_jumps->size;
  auto log_f = [d](double v, double log_dlo, double /*log_dhi*/) {
    if (log_dlo < kLogLimitSwitch) return std::log(d);
    return std::log(-std::expm1(-v * d)) - log_dlo;
  };
  const double val = integrate_singular(log_f, 0.0, u, inner_cfg_).value;
  if (cache_enabled_) delta_cache_->insert(cache_key(u), val);
  return val;
}

double PhiEvaluator::w(double u) const {
  const double K = cumulants_.K;
  if (!(u >= 0) || !(u < K)) throw DomainError("w: u must be in [0, K)");
  if (w_closed_form_) return -lambda_over_beta_ * std::log1p(-u / K);
  return w_gamma(u, K - u > 0 ? std::log(K - u) : neg_inf);
}

// Quadrature nodes within one ulp of K arrive with u == K but a finite
// log(K - u); the log distance is the authoritative coordinate there.
double PhiEvaluator::w(double u, double log_k_minus_u) const {
  const double K = cumulants_.K;
  if (!(u >= 0) || !(u <= K) || log_k_minus_u == neg_inf)
    throw DomainError("w: u must be in [0, K)");
  if (w_closed_form_) return -lambda_over_beta_ * (log_k_minus_u - std::log(K));
  return w_gamma(u, log_k_minus_u);
}

// (lambda/beta) int_0^u ((1-v)^{-rho} - 1)/v dv for Gamma(rho) jumps (K = 1).
// 1 - v is rebuilt as (1 - u) + (u - v) from log_base = log(1 - u), so the
// integrand keeps full precision near the upper end of the range even where
// 1 - u itself has underflowed.
double PhiEvaluator::w_gamma(double u, double log_base) const {
  if (u == 0) return 0;
  // Nodes within one ulp of K all carry u == K; they differ only through
  // log_base, so that becomes the cache key there.
  const long long key = cumulants_.K - u > 0
                            ? cache_key(u)
                            : (1LL << 62) + std::llround(-log_base * 1e9);
  if (cache_enabled_) {
    double cached;
    if (w_cache_->lookup(key, cached)) return cached;
  }
  const double rho = model_.pos_jumps.shape;
  const double mean = model_.pos_jumps.mean();
  auto log_f = [rho, mean, log_base](double /*v*/, double log_dlo, double log_dhi) {
    if (log_dlo < kLogLimitSwitch) return std::log(mean);
    const double log_omv = log_add(log_base, log_dhi); // log(1 - v)
    return log_expm1(-rho * log_omv) - log_dlo;
  };
  const double val = lambda_over_beta_ * integrate_singular(log_f, 0.0, u, inner_cfg_).value;
  if (cache_enabled_) w_cache_->insert(key, val);
  return val;
}

double PhiEvaluator::w_by_quadrature(double u) const {
  const double K = cumulants_.K;
  if (!(u >= 0) || !(u < K)) throw DomainError("w_by_quadrature: u must be in [0, K)");
  if (u == 0) return 0;
  if (model_.pos_jumps.type == PosJumpType::Gamma)
    return w_gamma(u, K - u > 0 ? std::log(K - u) : neg_inf);
  // Exponential law: (E e^{v xi} - 1)/v simplifies to 1/(K - v).
  const double log_base = K - u > 0 ? std::log(K - u) : neg_inf;
  auto log_f = [log_base](double /*v*/, double /*log_dlo*/, double log_dhi) {
    return -log_add(log_base, log_dhi);
  };
  return lambda_over_beta_ * integrate_singular(log_f, 0.0, u, inner_cfg_).value;
}

}  // namespace ouexit
