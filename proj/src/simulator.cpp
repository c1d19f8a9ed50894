#include "ouexit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

namespace ouexit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double draw_positive_jump(PathRng& rng, const PosJumpLaw& law) {
  if (law.type == PosJumpType::Exponential) return rng.exponential(law.rate);
  return rng.gamma(law.shape);
}

double draw_negative_jump(PathRng& rng, const NegJumpLaw& law) {
  if (law.type == NegJumpType::Exponential) return rng.exponential(law.rate);
  return law.size;
}

struct PathContext {
  double x, b, beta, m, sigma;
  double lam_pos, lam_neg, rate;
  const LevyModel* model;
  double t_max;
  const SimConfig* cfg;
};

ExitSample run_path_jump(const PathContext& ctx, PathRng& rng) {
  double state = ctx.x;
  double now = 0;
  long n_jumps = 0;
  for (;;) {
    double t_cross = kInf;
    if (ctx.m > ctx.b && state < ctx.b)
      t_cross = now + deterministic_crossing_time(state, ctx.m, ctx.beta, ctx.b);
    const double t_jump =
        ctx.cfg->suppress_jumps ? kInf : now + rng.exponential(ctx.rate);
    const double t_next = std::min(t_cross, t_jump);
    if (t_next > ctx.t_max) {
      const double end_state = ou_decay(state, ctx.m, ctx.beta, ctx.t_max - now);
      return {ctx.t_max, end_state, 0.0, true, n_jumps};
    }
    if (t_cross <= t_jump) {
      return {t_cross, ctx.b, 0.0, false, n_jumps};
    }
    state = ou_decay(state, ctx.m, ctx.beta, t_jump - now);
    now = t_jump;
    ++n_jumps;
    const bool positive =
        ctx.lam_neg == 0 ? true : rng.uniform() * ctx.rate < ctx.lam_pos;
    if (positive) {
      const double xi = draw_positive_jump(rng, ctx.model->pos_jumps);
      if (state + xi >= ctx.b)
        return {now, state + xi, state + xi - ctx.b, false, n_jumps};
      state += xi;
    } else {
      state -= draw_negative_jump(rng, *ctx.model->neg_jumps);
    }
  }
}

// First-crossing time of a Brownian bridge from (0, x0) to (delta, x1), both
// below b, given that a crossing occurred; located by recursive midpoint
// sampling.
double bridge_crossing_time(PathRng& rng, double x0, double x1, double b,
                            double delta, double sigma) {
  double tl = 0, tr = delta, xl = x0, xr = x1;
  for (int depth = 0; depth < 10; ++depth) {
    const double tm = 0.5 * (tl + tr);
    const double sd = 0.5 * sigma * std::sqrt(tr - tl);
    const double xm = 0.5 * (xl + xr) + sd * rng.normal();
    if (xm >= b) {
      tr = tm;
      xr = xm;
      continue;
    }
    const double var_half = sigma * sigma * (tm - tl);
    const double p_left =
        std::exp(-2.0 * std::max(0.0, b - xl) * std::max(0.0, b - xm) / var_half);
    if (rng.uniform() < p_left) {
      tr = tm;
      xr = xm;
    } else {
      tl = tm;
      xl = xm;
    }
  }
  return 0.5 * (tl + tr);
}

ExitSample run_path_diffusion(const PathContext& ctx, PathRng& rng) {
  double state = ctx.x;
  double now = 0;
  long n_jumps = 0;
  double next_jump = ctx.cfg->suppress_jumps ? kInf : rng.exponential(ctx.rate);
  for (;;) {
    const double t_end = std::min({now + ctx.cfg->dt, next_jump, ctx.t_max});
    const double delta = t_end - now;
    if (delta > 0) {
      const double decay = std::exp(-ctx.beta * delta);
      const double mean = ctx.m + (state - ctx.m) * decay;
      const double sd =
          ctx.sigma * std::sqrt((1.0 - decay * decay) / (2.0 * ctx.beta));
      const double next_state = mean + sd * rng.normal();
      if (next_state >= ctx.b) {
        return {t_end, next_state, next_state - ctx.b, false, n_jumps};
      }
      if (ctx.cfg->bridge_correction && ctx.sigma > 0) {
        const double p_cross = std::exp(-2.0 * (ctx.b - state) * (ctx.b - next_state) /
                                        (ctx.sigma * ctx.sigma * delta));
        if (rng.uniform() < p_cross) {
          const double tc =
              bridge_crossing_time(rng, state, next_state, ctx.b, delta, ctx.sigma);
          return {now + tc, ctx.b, 0.0, false, n_jumps};
        }
      }
      state = next_state;
      now = t_end;
    }
    if (now >= ctx.t_max) return {ctx.t_max, state, 0.0, true, n_jumps};
    if (now == next_jump) {
      ++n_jumps;
      const bool positive =
          ctx.lam_neg == 0 ? true : rng.uniform() * ctx.rate < ctx.lam_pos;
      if (positive) {
        const double xi = draw_positive_jump(rng, ctx.model->pos_jumps);
        if (state + xi >= ctx.b)
          return {now, state + xi, state + xi - ctx.b, false, n_jumps};
        state += xi;
      } else {
        state -= draw_negative_jump(rng, *ctx.model->neg_jumps);
      }
      next_jump = now + rng.exponential(ctx.rate);
    }
  }
}

double auto_t_max(const ExitProblem& problem, const SimConfig& cfg) {
  if (check_applicability(problem.model, IdentityId::ExplicitLaplace).applicable) {
    const double mean = ExitAnalytics(problem).mean_exit();
    if (std::isfinite(mean) && mean > 0) return 50.0 * mean;
  }
  // Pilot run under a wide horizon; its own seed stream so the main run's
  // draws are untouched.
  SimConfig pilot = cfg;
  pilot.n_paths = std::min<long>(cfg.n_paths, 1000);
  pilot.seed = cfg.seed ^ 0x5851F42D4C957F2DULL;
  pilot.t_max = 1e6;
  pilot.workers = 1;
  const auto samples = simulate_exit(problem, pilot);
  std::vector<double> taus;
  taus.reserve(samples.size());
  for (const auto& s : samples)
    if (!s.censored) taus.push_back(s.tau);
  if (taus.empty()) return 1e6;
  return 50.0 * mc_estimate(taus).mean;
}

}  // namespace

double ou_decay(double x, double m, double beta, double dt) {
  return m + (x - m) * std::exp(-beta * dt);
}

double ou_exact_step(double x, double m, double beta, double sigma, double dt, double z) {
  const double decay = std::exp(-beta * dt);
  return m + (x - m) * decay + sigma * std::sqrt((1.0 - decay * decay) / (2.0 * beta)) * z;
}

double deterministic_crossing_time(double x, double m, double beta, double b) {
  if (!(m > b) || !(x < b))
    throw DomainError("deterministic_crossing_time: requires m > b and x < b");
  return std::log((m - x) / (m - b)) / beta;
}

std::vector<ExitSample> simulate_exit(const ExitProblem& problem, const SimConfig& cfg) {
  problem.validate();
  cfg.validate();
  if (!(problem.b > problem.x)) throw DomainError("simulate_exit: requires b > x");
  if (cfg.mode == SimMode::PureJumpExact && problem.model.volatility > 0)
    throw ModeMismatch("simulate_exit: PureJumpExact requires volatility = 0");

  PathContext ctx;
  ctx.x = problem.x;
  ctx.b = problem.b;
  ctx.beta = problem.model.beta;
  ctx.m = problem.model.drift / problem.model.beta;
  ctx.sigma = problem.model.volatility;
  ctx.lam_pos = problem.model.pos_intensity;
  ctx.lam_neg = problem.model.has_neg_jumps() ? problem.model.neg_intensity : 0.0;
  ctx.rate = ctx.lam_pos + ctx.lam_neg;
  ctx.model = &problem.model;
  ctx.cfg = &cfg;
  ctx.t_max = cfg.t_max > 0 ? cfg.t_max : auto_t_max(problem, cfg);

  std::vector<ExitSample> samples(static_cast<std::size_t>(cfg.n_paths));
  auto run_range = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      PathRng rng(cfg.seed, static_cast<std::uint64_t>(i));
      samples[static_cast<std::size_t>(i)] = cfg.mode == SimMode::PureJumpExact
                                                 ? run_path_jump(ctx, rng)
                                                 : run_path_diffusion(ctx, rng);
    }
  };

  const int workers = static_cast<int>(
      std::min<long>(cfg.workers, std::max<long>(1, cfg.n_paths)));
  if (workers <= 1) {
    run_range(0, cfg.n_paths);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    const long chunk = (cfg.n_paths + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long lo = w * chunk;
      const long hi = std::min<long>(cfg.n_paths, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return samples;
}

double censored_fraction(const std::vector<ExitSample>& samples) {
  if (samples.empty()) return 0;
  long c = 0;
  for (const auto& s : samples) c += s.censored ? 1 : 0;
  return static_cast<double>(c) / static_cast<double>(samples.size());
}

namespace {

void require_uncensored(const std::vector<ExitSample>& samples, const char* what) {
  for (const auto& s : samples)
    if (s.censored)
      throw CensoredDataError(std::string(what) + ": censored samples present");
}

// Deterministic fan-out of an index loop; fill(i) must write only slot i.
template <class Fn>
void parallel_fill(std::size_t n, int workers, Fn&& fill) {
  const int w = static_cast<int>(std::min<std::size_t>(std::max(workers, 1), n));
  if (w <= 1) {
    for (std::size_t i = 0; i < n; ++i) fill(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + w - 1) / w;
  for (int t = 0; t < w; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fill] {
      for (std::size_t i = lo; i < hi; ++i) fill(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace

McEstimate estimate_laplace(const std::vector<ExitSample>& samples, double mu,
                            double beta) {
  if (!(mu >= 0)) throw DomainError("estimate_laplace: mu must be >= 0");
  require_uncensored(samples, "estimate_laplace");
  std::vector<double> vals(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i)
    vals[i] = std::exp(-mu * beta * samples[i].tau);
  return mc_estimate(vals);
}

McEstimate estimate_mean_exit(const std::vector<ExitSample>& samples) {
  require_uncensored(samples, "estimate_mean_exit");
  std::vector<double> taus(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) taus[i] = samples[i].tau;
  return mc_estimate(taus);
}

IdentityCheck check_martingale_identity(const ExitAnalytics& analytics,
                                        const std::vector<ExitSample>& samples,
                                        double mu, int workers) {
  const auto& model = analytics.problem().model;
  const auto rep = check_applicability(model, IdentityId::MartingaleTransform);
  if (!rep.applicable)
    throw NotApplicable("martingale identity: " + rep.failed_hypotheses.front());
  require_uncensored(samples, "check_martingale_identity");

  std::vector<double> weights(samples.size());
  parallel_fill(samples.size(), workers, [&](std::size_t i) {
    weights[i] = analytics.martingale_weight(samples[i].exit_value, samples[i].tau, mu);
  });
  const auto lhs = mc_estimate(weights);
  const double rhs = analytics.g_function(analytics.problem().x, mu);

  IdentityCheck chk;
  chk.name = "martingale_identity";
  chk.lhs_mean = lhs.mean;
  chk.lhs_se = lhs.std_error;
  chk.rhs_mean = rhs;
  chk.z = (lhs.mean - rhs) / lhs.std_error;
  chk.n = lhs.n;
  chk.pass = std::fabs(chk.z) < 3.0;
  return chk;
}

IdentityCheck check_mean_identity(const ExitAnalytics& analytics,
                                  const std::vector<ExitSample>& samples,
                                  int workers) {
  const auto& model = analytics.problem().model;
  const auto rep = check_applicability(model, IdentityId::ExitMean);
  if (!rep.applicable)
    throw NotApplicable("mean identity: " + rep.failed_hypotheses.front());
  require_uncensored(samples, "check_mean_identity");

  const double beta = model.beta;
  std::vector<double> integrals(samples.size()), taus(samples.size()),
      diffs(samples.size());
  parallel_fill(samples.size(), workers, [&](std::size_t i) {
    integrals[i] = analytics.mean_identity_integral(samples[i].exit_value);
    taus[i] = samples[i].tau;
    diffs[i] = integrals[i] - beta * taus[i];
  });
  const auto lhs = mc_estimate(integrals);
  const auto tau_est = mc_estimate(taus);
  const auto diff = mc_estimate(diffs);

  IdentityCheck chk;
  chk.name = "mean_identity";
  chk.lhs_mean = lhs.mean;
  chk.lhs_se = lhs.std_error;
  chk.rhs_mean = beta * tau_est.mean;
  chk.rhs_se = beta * tau_est.std_error;
  chk.z = diff.mean / diff.std_error;
  chk.n = lhs.n;
  chk.pass = std::fabs(chk.z) < 3.0;
  return chk;
}

IdentityCheck check_laplace_formula(const ExitAnalytics& analytics,
                                    const std::vector<ExitSample>& samples, double mu) {
  const auto est = estimate_laplace(samples, mu, analytics.problem().model.beta);
  const double rhs = analytics.laplace_exit(mu).value;
  IdentityCheck chk;
  chk.name = "laplace_formula";
  chk.lhs_mean = est.mean;
  chk.lhs_se = est.std_error;
  chk.rhs_mean = rhs;
  chk.z = (est.mean - rhs) / est.std_error;
  chk.n = est.n;
  chk.pass = std::fabs(chk.z) < 3.0;
  return chk;
}

OvershootReport overshoot_tests(const std::vector<ExitSample>& samples, double K) {
  if (!(K > 0)) throw DomainError("overshoot_tests: K must be positive");
  std::vector<double> chi, tau;
  chi.reserve(samples.size());
  tau.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.censored) continue;
    chi.push_back(s.overshoot);
    tau.push_back(s.tau);
  }
  if (chi.size() < 10000)
    throw InsufficientData("overshoot_tests: need at least 10^4 uncensored samples");
  const double n = static_cast<double>(chi.size());

  OvershootReport rep;
  rep.n = static_cast<long>(chi.size());
  rep.ks_stat = ks_statistic(chi, [K](double v) { return -std::expm1(-K * v); });
  rep.ks_threshold = 1.63 / std::sqrt(n); // alpha ~ 0.01
  rep.ks_pass = rep.ks_stat < rep.ks_threshold;
  rep.corr = pearson_correlation(chi, tau);
  rep.corr_threshold = 3.0 / std::sqrt(n);
  rep.corr_pass = std::fabs(rep.corr) < rep.corr_threshold;
  const auto mean_est = mc_estimate(chi);
  rep.mean_overshoot = mean_est.mean;
  rep.mean_se = mean_est.std_error;
  rep.expected_mean = 1.0 / K;
  rep.mean_pass = std::fabs(mean_est.mean - rep.expected_mean) < 3.0 * mean_est.std_error;
  rep.pass = rep.ks_pass && rep.corr_pass && rep.mean_pass;
  return rep;
}

LimitTheoremReport check_limit_theorem(const ExitProblem& problem, const SimConfig& cfg,
                                       const std::vector<double>& b_grid) {
  if (b_grid.empty()) throw DomainError("check_limit_theorem: empty b grid");
  LimitTheoremReport rep;
  rep.b_grid = b_grid;
  rep.decreasing = true;
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    ExitProblem prob = problem;
    prob.b = b_grid[i];
    const auto samples = simulate_exit(prob, cfg);
    const auto mean_est = estimate_mean_exit(samples);
    std::vector<double> scaled(samples.size());
    for (std::size_t j = 0; j < samples.size(); ++j)
      scaled[j] = samples[j].tau / mean_est.mean;
    const double ks = ks_statistic(scaled, [](double v) { return -std::expm1(-v); });
    if (i > 0 && ks >= rep.ks_distance.back()) rep.decreasing = false;
    rep.ks_distance.push_back(ks);
    if (i + 1 == b_grid.size()) {
      long exceed = 0;
      for (double v : scaled) exceed += v > 1.0 ? 1 : 0;
      rep.p_exceed_mean_last = static_cast<double>(exceed) / static_cast<double>(samples.size());
    }
  }
  return rep;
}

}  // namespace ouexit
