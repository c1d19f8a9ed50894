#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <thread>

#include "oracles.hpp"
#include "ouexit/phi_kernel.hpp"

using namespace ouexit;

namespace {

LevyModel make_model(double rate, double lam, double beta) {
  LevyModel m;
  m.pos_jumps = PosJumpLaw::exponential(rate);
  m.pos_intensity = lam;
  m.beta = beta;
  return m;
}

LevyModel make_gamma(double shape, double lam = 1.0, double beta = 1.0) {
  LevyModel m;
  m.pos_jumps = PosJumpLaw::gamma(shape);
  m.pos_intensity = lam;
  m.beta = beta;
  return m;
}

}  // namespace

TEST_CASE("delta closed forms") {
  auto m = make_model(1.0, 1.0, 1.0);
  m.volatility = std::sqrt(2.0);
  // (sigma^2 u^2 / 4) / beta at u = 1
  CHECK(PhiEvaluator(m).delta(1.0) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(PhiEvaluator(m).delta(0.0) == 0.0);

  auto m2 = make_model(5.0, 1.0, 2.0);
  m2.drift = 1.0;
  // (c u) / beta at u = 2
  CHECK(PhiEvaluator(m2).delta(2.0) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("delta with exponential negative jumps matches a brute-force integral") {
  auto m = make_model(5.0, 1.0, 1.5);
  m.neg_jumps = NegJumpLaw::exponential(2.0);
  m.neg_intensity = 3.0;
  const PhiEvaluator phi(m);
  // psi_Q(v)/v = neg_intensity (nu/(nu+v) - 1)/v = -neg_intensity/(nu + v),
  // integrated numerically (the implementation goes through log1p instead).
  for (double u : {0.5, 1.7, 3.0}) {
    const double oracle =
        oracles::simpson([&](double v) { return -3.0 / (2.0 + v); }, 0.0, u) / m.beta;
    CHECK(phi.delta(u) == doctest::Approx(oracle).epsilon(1e-9));
  }
}

TEST_CASE("delta with constant negative jumps matches the Ein series") {
  auto m = make_model(5.0, 1.0, 1.0);
  m.neg_jumps = NegJumpLaw::constant(1.5);
  m.neg_intensity = 2.0;
  const PhiEvaluator phi(m);
  for (double u : {0.3, 1.0, 2.5}) {
    const double expected = -2.0 * oracles::ein(1.5 * u);
    CHECK(phi.delta(u) == doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("w closed form for exponential jumps") {
  const PhiEvaluator phi(make_model(1.0, 1.0, 1.0));
  CHECK(phi.w(0.5) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(phi.w(0.0) == 0.0);
  const PhiEvaluator phi2(make_model(2.0, 2.0, 1.0));
  CHECK(phi2.w(1.0) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
}

TEST_CASE("phi is the sum of delta and w") {
  auto m = make_model(1.0, 1.0, 1.0);
  m.volatility = std::sqrt(2.0);
  const PhiEvaluator phi(m);
  CHECK(phi.phi(0.5) == doctest::Approx(std::log(2.0) + 0.125).epsilon(1e-14));
  CHECK(phi.phi(0.0) == 0.0);
  CHECK(phi.log_exp_neg_phi(0.5) == -phi.phi(0.5));
}

TEST_CASE("numeric W agrees with the closed form for exponential jumps") {
  for (const auto& m : {make_model(1.0, 1.0, 1.0), make_model(2.0, 2.0, 1.5)}) {
    const PhiEvaluator phi(m);
    const double K = phi.K();
    for (int i = 1; i <= 9; ++i) {
      const double u = 0.1 * i * K;
      CHECK(phi.w_by_quadrature(u) == doctest::Approx(phi.w(u)).epsilon(1e-9));
    }
  }
}

TEST_CASE("gamma shape 1 reproduces the explicit exponential-jump formula") {
  const PhiEvaluator phi(make_gamma(1.0, 1.3, 0.8));
  for (int i = 1; i <= 9; ++i) {
    const double u = 0.1 * i;
    const double expected = -(1.3 / 0.8) * std::log1p(-u);
    CHECK(phi.w(u) == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("W dominates the quadratic lower bound") {
  const double delta_cut = 0.1;
  for (const auto& m : {make_model(1.0, 1.0, 1.0), make_model(2.0, 1.5, 0.7)}) {
    const PhiEvaluator phi(m);
    const double tail = m.pos_jumps.tail_prob(delta_cut);
    const double lb_factor = m.pos_intensity / m.beta;
    for (double u = 0.05; u < 0.95 * phi.K(); u += 0.05 * phi.K()) {
      const double bound =
          lb_factor * (u * delta_cut + u * u * delta_cut * delta_cut / 4.0) * tail;
      CHECK(phi.w(u) >= bound);
      CHECK(phi.w(u) > 0.0);
    }
  }
  for (const auto& m : {make_gamma(2.0), make_gamma(0.5)}) {
    const PhiEvaluator phi(m);
    const double tail = m.pos_jumps.tail_prob(delta_cut);
    for (double u = 0.05; u < 0.95; u += 0.05) {
      const double bound = (u * delta_cut + u * u * delta_cut * delta_cut / 4.0) * tail;
      CHECK(phi.w(u) >= bound);
    }
  }
}

TEST_CASE("W is increasing and convex") {
  for (const auto& m : {make_model(1.0, 1.0, 1.0), make_gamma(2.0), make_gamma(0.5)}) {
    const PhiEvaluator phi(m);
    const double h = 0.03 * phi.K();
    double prev = phi.w(0.0);
    double prev_slope = -1e300;
    for (double u = h; u < 0.9 * phi.K(); u += h) {
      const double cur = phi.w(u);
      const double slope = cur - prev;
      CHECK(cur > prev);
      CHECK(slope > prev_slope * (1 - 1e-9));
      prev = cur;
      prev_slope = slope;
    }
  }
}

TEST_CASE("domain errors outside [0, K)") {
  const PhiEvaluator phi(make_model(1.0, 1.0, 1.0));
  CHECK_THROWS_AS(phi.w(-0.1), DomainError);
  CHECK_THROWS_AS(phi.w(1.0), DomainError);
  CHECK_THROWS_AS(phi.phi(1.5), DomainError);
  CHECK_THROWS_AS(phi.delta(1.0 + 1e-9), DomainError);
  CHECK_NOTHROW(phi.delta(1.0)); // delta extends continuously to K
}

TEST_CASE("cache does not change values") {
  const PhiEvaluator cached(make_gamma(2.0), {}, true);
  const PhiEvaluator uncached(make_gamma(2.0), {}, false);
  for (double u = 0.05; u < 1.0; u += 0.07) {
    CHECK(cached.w(u) == uncached.w(u));
    CHECK(cached.w(u) == cached.w(u)); // second read served from the cache
  }
}

TEST_CASE("concurrent phi evaluation is consistent") {
  const PhiEvaluator phi(make_gamma(1.5));
  std::vector<double> grid;
  for (double u = 0.01; u < 0.99; u += 0.008) grid.push_back(u);
  std::vector<double> serial(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) serial[i] = phi.phi(grid[i]);

  const PhiEvaluator fresh(make_gamma(1.5));
  std::vector<double> parallel(grid.size());
  std::vector<std::thread> pool;
  for (int w = 0; w < 4; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = static_cast<std::size_t>(w); i < grid.size(); i += 4)
        parallel[i] = fresh.phi(grid[i]);
    });
  }
  for (auto& th : pool) th.join();
  for (std::size_t i = 0; i < grid.size(); ++i) CHECK(parallel[i] == serial[i]);
}
