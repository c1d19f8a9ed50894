#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "ouexit/exit_analytics.hpp"

using namespace ouexit;

namespace {

LevyModel bare_exp_model() { // K = 1, lambda = beta = 1, Delta == 0
  LevyModel m;
  m.pos_jumps = PosJumpLaw::exponential(1.0);
  m.pos_intensity = 1.0;
  m.beta = 1.0;
  return m;
}

LevyModel rich_model() { // diffusion + drift + negative jumps, K = 2
  LevyModel m;
  m.pos_jumps = PosJumpLaw::exponential(2.0);
  m.pos_intensity = 2.0;
  m.beta = 1.0;
  m.drift = 0.5;
  m.volatility = 1.0;
  m.neg_jumps = NegJumpLaw::exponential(1.0);
  m.neg_intensity = 0.5;
  return m;
}

LevyModel gamma_model(double shape) {
  LevyModel m;
  m.pos_jumps = PosJumpLaw::gamma(shape);
  m.pos_intensity = 1.0;
  m.beta = 1.0;
  return m;
}

const double kE2 = std::exp(2.0);

}  // namespace

TEST_CASE("G for the bare exponential model") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  // e^{-phi} = 1 - u: G(0,1) = int (1-u) du, G(2,1) = int e^{2u}(1-u) du
  CHECK(ana.g_function(0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(ana.g_function(2.0, 1.0) == doctest::Approx((kE2 - 3.0) / 4.0).epsilon(1e-10));
}

TEST_CASE("small-mu normalization: mu G(x, mu) -> 1") {
  const double mu = 1e-4;
  for (const auto& m : {bare_exp_model(), rich_model(), gamma_model(2.0)}) {
    const ExitAnalytics ana({0.0, 2.0, m});
    const double v = mu * ana.g_function(0.0, mu);
    CHECK(v > 0.999);
    CHECK(v < 1.001);
  }
}

TEST_CASE("G is nondecreasing in z") {
  const ExitAnalytics ana({0.0, 2.0, rich_model()});
  double prev = ana.g_function(-1.0, 1.5);
  for (double z : {-0.5, 0.0, 0.5, 1.0, 2.0}) {
    const double cur = ana.g_function(z, 1.5);
    CHECK(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("laplace transform closed-integral example") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  const auto lv = ana.laplace_exit(1.0);
  const double expected = 0.5 / ((kE2 - 1.0) / 2.0);
  CHECK(lv.value == doctest::Approx(expected).epsilon(1e-10));
  CHECK(lv.numerator.converged);
  CHECK(lv.denominator.converged);
}

TEST_CASE("laplace transform tends to 1 as mu -> 0") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  CHECK(std::fabs(ana.laplace_exit(1e-6).value - 1.0) < 1e-3);
}

TEST_CASE("laplace value lies in (0,1] and decreases in mu and b") {
  const ExitAnalytics ana({0.0, 2.0, rich_model()});
  double prev = 1.0 + 1e-12;
  for (double mu : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double v = ana.laplace_exit(mu).value;
    CHECK(v > 0.0);
    CHECK(v <= 1.0);
    CHECK(v < prev);
    prev = v;
  }
  double prev_b = 1.0 + 1e-12;
  for (double b : {0.5, 1.0, 2.0, 3.0}) {
    const ExitAnalytics ab({0.0, b, rich_model()});
    const double v = ab.laplace_exit(1.0).value;
    CHECK(v < prev_b);
    prev_b = v;
  }
}

TEST_CASE("degenerate barrier b == x is dominated") {
  const ExitAnalytics ana({0.5, 0.5, bare_exp_model()});
  const double v = ana.laplace_exit(1.0).value;
  CHECK(v > 0.0);
  CHECK(v <= 1.0);
}

TEST_CASE("mean exit time against the series oracle") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  const double oracle = 1.0 + oracles::exp_minus_one_over_u(2.0);
  CHECK(ana.mean_exit() == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(oracle == doctest::Approx(4.68387).epsilon(1e-5));
}

TEST_CASE("mean exit at b just above x approaches 1/K") {
  const ExitAnalytics ana({0.0, 1e-8, bare_exp_model()});
  CHECK(ana.mean_exit() == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("neglecting the overshoot bounds the mean from below") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  const PhiEvaluator& phi = ana.phi();
  auto log_f = [&](double u, double log_dlo, double log_dhi) {
    return log_expm1(u * 2.0) - phi.phi(u, log_dhi) - log_dlo;
  };
  const double lower = integrate_singular(log_f, 0.0, 1.0).value; // X_tau set to b
  CHECK(lower <= ana.mean_exit());
  CHECK(lower > 0.0);
}

TEST_CASE("mean equals the small-mu derivative of the transform") {
  for (const auto& m : {bare_exp_model(), rich_model()}) {
    const ExitAnalytics ana({0.0, 2.0, m});
    for (double mu : {1e-6, 1e-4}) { // expansion branch, then the integral ratio
      const double approx = (1.0 - ana.laplace_exit(mu).value) / (mu * m.beta);
      CHECK(approx == doctest::Approx(ana.mean_exit()).epsilon(1e-3));
    }
  }
}

TEST_CASE("averaging the mean-identity integral over the overshoot law gives beta E tau") {
  // X_tau = b + Exp(K): E e^{u X_tau} = e^{ub} K/(K-u), folded analytically.
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  const PhiEvaluator& phi = ana.phi();
  const double b = 2.0, x = 0.0, K = 1.0;
  auto log_f = [&](double u, double log_dlo, double log_dhi) {
    const double lomk = log_dhi - std::log(K);
    const double arg = u * (b - x) - lomk; // e^{ub}K/(K-u) - e^{ux} = e^{ux} expm1(arg)
    return u * x + log_expm1(arg) - phi.phi(u, log_dhi) - log_dlo;
  };
  const double averaged = integrate_singular(log_f, 0.0, K).value;
  CHECK(averaged == doctest::Approx(1.0 * ana.mean_exit()).epsilon(1e-9));
}

TEST_CASE("mean-identity integral examples") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  CHECK(ana.mean_identity_integral(0.0) == 0.0);
  // int_0^1 (e^{2u}-1)(1-u)/u du
  const double series = oracles::exp_minus_one_times_one_minus_u_over_u(2.0);
  CHECK(series == doctest::Approx(1.4893430).epsilon(1e-6));
  CHECK(ana.mean_identity_integral(2.0) == doctest::Approx(series).epsilon(1e-9));
  CHECK(ana.mean_identity_integral(2.5) > ana.mean_identity_integral(2.0));
}

TEST_CASE("martingale weight examples") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  const double g_at_x = ana.g_function(0.0, 1.0);
  CHECK(ana.martingale_weight(0.0, 0.0, 1.0) == g_at_x);
  const double expected = std::exp(-1.0) * (kE2 - 3.0) / 4.0;
  CHECK(ana.martingale_weight(2.0, 1.0, 1.0) == doctest::Approx(expected).epsilon(1e-10));
  CHECK(ana.martingale_weight(2.0, 1.5, 1.0) < ana.martingale_weight(2.0, 1.0, 1.0));
}

TEST_CASE("asymptotic mean closed form") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  CHECK(ana.asymptotic_mean().value == doctest::Approx(kE2 / 2.0).epsilon(1e-12));

  LevyModel two = bare_exp_model();
  two.pos_intensity = 2.0; // lambda/beta = 2, C = Gamma(2) = 1
  const ExitAnalytics ana2({0.0, 10.0, two});
  CHECK(ana2.asymptotic_mean().value ==
        doctest::Approx(std::exp(10.0) / 100.0).epsilon(1e-12));
}

TEST_CASE("asymptotic mean approaches the exact mean for large b") {
  const ExitAnalytics a20({0.0, 20.0, bare_exp_model()});
  const double ratio = a20.mean_exit() / a20.asymptotic_mean().value;
  CHECK(std::fabs(ratio - 1.0) < 0.10);
}

TEST_CASE("scaled transform approaches 1/(1+z)") {
  const ExitAnalytics a15({0.0, 15.0, bare_exp_model()});
  CHECK(std::fabs(a15.limit_laplace(1.0) - 0.5) < 0.05);
  CHECK(a15.limit_laplace(1e-9) == doctest::Approx(1.0).epsilon(1e-6));
  const ExitAnalytics a8({0.0, 8.0, bare_exp_model()});
  const ExitAnalytics a20({0.0, 20.0, bare_exp_model()});
  CHECK(std::fabs(a20.limit_laplace(1.0) - 0.5) < std::fabs(a8.limit_laplace(1.0) - 0.5));
}

TEST_CASE("formulas requiring exponential jumps reject gamma models") {
  const ExitAnalytics ana({0.0, 2.0, gamma_model(2.0)});
  CHECK_THROWS_AS(ana.laplace_exit(1.0), NotApplicable);
  CHECK_THROWS_AS(ana.mean_exit(), NotApplicable);
  CHECK_THROWS_AS(ana.asymptotic_mean(), NotApplicable);
  // G and the identity integrals stay available
  CHECK(ana.g_function(0.0, 1.0) > 0.0);
  CHECK(ana.mean_identity_integral(2.5) > 0.0);
}

TEST_CASE("argument validation") {
  const ExitAnalytics ana({0.0, 2.0, bare_exp_model()});
  CHECK_THROWS_AS(ana.laplace_exit(0.0), DomainError);
  CHECK_THROWS_AS(ana.g_function(0.0, -1.0), DomainError);
  CHECK_THROWS_AS(ana.mean_identity_integral(-0.5), DomainError);
  CHECK_THROWS_AS((ExitAnalytics{{1.0, 0.5, bare_exp_model()}}), DomainError);
}
