#include "ouexit/exit_analytics.hpp"

#include <cmath>

namespace ouexit {

ExitAnalytics::ExitAnalytics(ExitProblem problem, QuadratureConfig cfg)
    : prob_(std::move(problem)),
      cfg_(cfg),
      phi_(prob_.model, cfg),
      lam_over_beta_(prob_.model.pos_intensity / prob_.model.beta) {
  prob_.validate();
  cfg_.validate();
}

void ExitAnalytics::require_exponential_jumps(const char* what) const {
  if (prob_.model.pos_jumps.type != PosJumpType::Exponential)
    throw NotApplicable(std::string(what) + ": requires exponential positive jumps");
}

double ExitAnalytics::g_function(double z, double mu) const {
  if (!(mu > 0)) throw DomainError("g_function: mu must be positive");
  const double K = phi_.K();
  auto log_f = [&, z, mu](double u, double log_dlo, double log_dhi) {
    return u * z - phi_.phi(u, log_dhi) + (mu - 1.0) * log_dlo;
  };
  return integrate_singular(log_f, 0.0, K, cfg_).value;
}

// All four explicit formulas integrate members of one family,
//   (1 - u/K)^{edge_power} u^{mu-1} e^{u*slope - Delta(u)},
// assembled here from log(K-u) and log(u) supplied by the quadrature engine.
LaplaceValue ExitAnalytics::laplace_exit(double mu) const {
  require_exponential_jumps("laplace_exit");
  if (!(mu > 0)) throw DomainError("laplace_exit: mu must be positive");

  // Deep in the mu -> 0 regime the u^{mu-1} mass sits at log u ~ -1/mu and
  // the integrals lose precision to exponent cancellation; the expansion
  // 1 - mu beta E tau + O((mu beta E tau)^2) is exact to ~1e-8 there.
  const double small = mu * prob_.model.beta * mean_exit();
  if (small < 1e-4) {
    LaplaceValue out;
    out.mu = mu;
    out.value = 1.0 - small;
    return out;
  }

  const double K = phi_.K();
  const double log_K = std::log(K);

  auto make_integrand = [&](double edge_power, double slope) {
    return [this, edge_power, slope, mu, log_K](double u, double log_dlo,
                                                double log_dhi) {
      return edge_power * (log_dhi - log_K) + (mu - 1.0) * log_dlo +
             u * slope - phi_.delta(u);
    };
  };

  LaplaceValue out;
  out.mu = mu;
  out.numerator =
      integrate_singular(make_integrand(lam_over_beta_, prob_.x), 0.0, K, cfg_);
  out.denominator =
      integrate_singular(make_integrand(lam_over_beta_ - 1.0, prob_.b), 0.0, K, cfg_);
  const double v = std::exp(out.numerator.log_value() - out.denominator.log_value());
  out.value = v > 1.0 ? 1.0 : v;
  return out;
}

double ExitAnalytics::mean_exit() const {
  require_exponential_jumps("mean_exit");
  if (mean_cache_) return *mean_cache_;
  const double K = phi_.K();
  const double log_K = std::log(K);
  const double x = prob_.x, b = prob_.b;
  const double edge_power = lam_over_beta_ - 1.0;

  // The bracket e^{ub} - e^{ux}(1 - u/K) vanishes linearly at u = 0; writing
  // it as e^{ux} (1-u/K) expm1(u(b-x) - log(1-u/K)) keeps it exact there and
  // stays in log space near u = K.
  auto log_f = [&](double u, double log_dlo, double log_dhi) {
    const double lomk = log_dhi - log_K; // log(1 - u/K)
    const double arg = u * (b - x) - lomk;
    const double log_bracket = u * x + lomk + log_expm1(arg);
    return log_bracket + edge_power * lomk - phi_.delta(u) - log_dlo;
  };
  const double val =
      std::exp(integrate_singular(log_f, 0.0, K, cfg_).log_value()) / prob_.model.beta;
  mean_cache_ = val;
  return val;
}

double ExitAnalytics::mean_identity_integral(double exit_value) const {
  if (!(exit_value >= prob_.x))
    throw DomainError("mean_identity_integral: exit_value must be >= x");
  const double K = phi_.K();
  const double x = prob_.x;
  const double gap = exit_value - x;
  if (gap == 0) return 0;
  auto log_f = [&](double u, double log_dlo, double log_dhi) {
    return u * x + log_expm1(u * gap) - phi_.phi(u, log_dhi) - log_dlo;
  };
  return integrate_singular(log_f, 0.0, K, cfg_).value;
}

double ExitAnalytics::martingale_weight(double exit_value, double exit_time,
                                        double mu) const {
  if (!(exit_time >= 0)) throw DomainError("martingale_weight: exit_time must be >= 0");
  return std::exp(-mu * prob_.model.beta * exit_time) * g_function(exit_value, mu);
}

AsymptoticMean ExitAnalytics::asymptotic_mean() const {
  require_exponential_jumps("asymptotic_mean");
  const double K = phi_.K();
  const double b = prob_.b;
  const double log_c = std::lgamma(lam_over_beta_) - std::log(prob_.model.beta * K) -
                       phi_.delta(K);
  AsymptoticMean out;
  out.log_value = log_c + K * b - lam_over_beta_ * std::log(K * b);
  out.value = std::exp(out.log_value);
  return out;
}

double ExitAnalytics::limit_laplace(double z) const {
  if (!(z > 0)) throw DomainError("limit_laplace: z must be positive");
  const double mu = z / (prob_.model.beta * mean_exit());
  return laplace_exit(mu).value;
}

}  // namespace ouexit
