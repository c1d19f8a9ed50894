#include "ouexit/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <vector>

#include <CLI11.hpp>

#include "ouexit/inversion.hpp"
#include "ouexit/model_io.hpp"
#include "ouexit/simulator.hpp"

namespace ouexit {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> grid_points(const GridSpec& g) {
  std::vector<double> pts;
  pts.reserve(static_cast<std::size_t>(g.n));
  if (g.n == 1) {
    pts.push_back(g.lo);
    return pts;
  }
  const double step = (g.hi - g.lo) / static_cast<double>(g.n - 1);
  for (long i = 0; i < g.n; ++i) pts.push_back(g.lo + step * static_cast<double>(i));
  return pts;
}

std::string grid_text(const GridSpec& g) {
  return fmt(g.lo) + ":" + fmt(g.hi) + ":" + std::to_string(g.n);
}

int resolved_workers(const RunConfig& cfg) {
  if (cfg.workers > 0) return cfg.workers;
  if (const char* env = std::getenv("OUEXIT_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

QuadratureConfig quad_config(const RunConfig& cfg) {
  QuadratureConfig q;
  q.abs_tol = cfg.quad_tol;
  q.rel_tol = cfg.quad_tol;
  q.max_levels = cfg.quad_max_levels;
  q.validate();
  return q;
}

SimConfig sim_config(const RunConfig& cfg) {
  SimConfig s;
  s.n_paths = cfg.n_paths;
  s.seed = cfg.seed;
  if (cfg.mode == "jump") {
    s.mode = SimMode::PureJumpExact;
  } else if (cfg.mode == "euler") {
    s.mode = SimMode::DiffusionEuler;
  } else {
    throw DomainError("mode: must be \"jump\" or \"euler\"");
  }
  s.dt = cfg.dt;
  s.t_max = cfg.t_max;
  s.workers = resolved_workers(cfg);
  s.validate();
  return s;
}

// Leading comment line: the full resolved configuration, so a run can be
// reproduced from its own output file.
void write_config_comment(std::ostream& out, const RunConfig& cfg) {
  out << "# ouexit " << cfg.subcommand << " model=" << cfg.model_path;
  const auto& sc = cfg.subcommand;
  if (sc == "phi") out << " u-grid=" << grid_text(cfg.u_grid);
  if (sc == "laplace" || sc == "mean" || sc == "limit" || sc == "survival" ||
      sc == "simulate" || sc == "validate")
    out << " x=" << fmt(cfg.x) << " b=" << fmt(cfg.b);
  if (sc == "laplace") out << " mu-grid=" << grid_text(cfg.mu_grid);
  if (sc == "asymptotic") out << " b-grid=" << grid_text(cfg.b_grid);
  if (sc == "limit") out << " z-grid=" << grid_text(cfg.z_grid);
  if (sc == "survival")
    out << " t-grid=" << grid_text(cfg.t_grid) << " terms=" << cfg.terms;
  if (sc == "simulate" || sc == "validate") {
    out << " n=" << cfg.n_paths << " seed=" << cfg.seed << " mode=" << cfg.mode;
    if (cfg.mode == "euler") out << " dt=" << fmt(cfg.dt);
    if (cfg.t_max > 0) out << " t-max=" << fmt(cfg.t_max);
    out << " workers=" << resolved_workers(cfg);
  }
  if (sc == "validate") out << " mu=" << fmt(cfg.mu);
  out << " quad-tol=" << fmt(cfg.quad_tol) << " quad-max-levels=" << cfg.quad_max_levels;
  out << "\n";
}

int run_phi(const RunConfig& cfg, std::ostream& out) {
  const PhiEvaluator phi(load_model_file(cfg.model_path), quad_config(cfg));
  out << "u,delta,w,phi\n";
  for (double u : grid_points(cfg.u_grid)) {
    const double d = phi.delta(u);
    const double wv = phi.w(u);
    out << fmt(u) << ',' << fmt(d) << ',' << fmt(wv) << ',' << fmt(d + wv) << "\n";
  }
  return 0;
}

int run_laplace(const RunConfig& cfg, std::ostream& out) {
  const ExitAnalytics analytics({cfg.x, cfg.b, load_model_file(cfg.model_path)},
                                quad_config(cfg));
  out << "mu,value\n";
  for (double mu : grid_points(cfg.mu_grid))
    out << fmt(mu) << ',' << fmt(analytics.laplace_exit(mu).value) << "\n";
  return 0;
}

int run_mean(const RunConfig& cfg, std::ostream& out) {
  const ExitAnalytics analytics({cfg.x, cfg.b, load_model_file(cfg.model_path)},
                                quad_config(cfg));
  out << "x,b,mean\n";
  out << fmt(cfg.x) << ',' << fmt(cfg.b) << ',' << fmt(analytics.mean_exit()) << "\n";
  return 0;
}

int run_asymptotic(const RunConfig& cfg, std::ostream& out) {
  const auto model = load_model_file(cfg.model_path);
  out << "b,value,log_value\n";
  for (double b : grid_points(cfg.b_grid)) {
    const ExitAnalytics analytics({0.0, b, model}, quad_config(cfg));
    const auto asym = analytics.asymptotic_mean();
    out << fmt(b) << ',' << fmt(asym.value) << ',' << fmt(asym.log_value) << "\n";
  }
  return 0;
}

int run_limit(const RunConfig& cfg, std::ostream& out) {
  const ExitAnalytics analytics({cfg.x, cfg.b, load_model_file(cfg.model_path)},
                                quad_config(cfg));
  out << "z,value\n";
  for (double z : grid_points(cfg.z_grid))
    out << fmt(z) << ',' << fmt(analytics.limit_laplace(z)) << "\n";
  return 0;
}

int run_survival(const RunConfig& cfg, std::ostream& out) {
  const ExitAnalytics analytics({cfg.x, cfg.b, load_model_file(cfg.model_path)},
                                quad_config(cfg));
  InversionConfig inv;
  inv.terms = cfg.terms;
  inv.validate();
  out << "t,survival,err_est\n";
  for (double t : grid_points(cfg.t_grid)) {
    const auto pt = survival(analytics, t, inv);
    out << fmt(t) << ',' << fmt(pt.value) << ',' << fmt(pt.err_estimate) << "\n";
  }
  return 0;
}

int run_simulate(const RunConfig& cfg, std::ostream& out) {
  const ExitProblem problem{cfg.x, cfg.b, load_model_file(cfg.model_path)};
  const auto samples = simulate_exit(problem, sim_config(cfg));
  if (cfg.summary) {
    std::vector<double> taus, overshoots;
    for (const auto& s : samples) {
      if (s.censored) continue;
      taus.push_back(s.tau);
      overshoots.push_back(s.overshoot);
    }
    out << "n,mean_tau,se_tau,mean_overshoot,censored_fraction\n";
    const auto tau_est = mc_estimate(taus);
    const auto ov_est = mc_estimate(overshoots);
    out << samples.size() << ',' << fmt(tau_est.mean) << ',' << fmt(tau_est.std_error)
        << ',' << fmt(ov_est.mean) << ',' << fmt(censored_fraction(samples)) << "\n";
    return 0;
  }
  out << "path,tau,exit_value,overshoot,censored,n_jumps\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    out << i << ',' << fmt(s.tau) << ',' << fmt(s.exit_value) << ','
        << fmt(s.overshoot) << ',' << (s.censored ? 1 : 0) << ',' << s.n_jumps << "\n";
  }
  return 0;
}

int run_validate(const RunConfig& cfg, std::ostream& out) {
  const ExitProblem problem{cfg.x, cfg.b, load_model_file(cfg.model_path)};
  const ExitAnalytics analytics(problem, quad_config(cfg));
  const int workers = resolved_workers(cfg);
  const auto samples = simulate_exit(problem, sim_config(cfg));
  const auto& model = problem.model;

  bool any_fail = false;
  out << "check,status,value,threshold\n";
  auto row = [&](const std::string& name, bool applicable, bool pass, double value,
                 double threshold) {
    if (!applicable) {
      out << name << ",na,,\n";
      return;
    }
    any_fail = any_fail || !pass;
    out << name << ',' << (pass ? "pass" : "fail") << ',' << fmt(value) << ','
        << fmt(threshold) << "\n";
  };

  const bool laplace_ok =
      check_applicability(model, IdentityId::ExplicitLaplace).applicable;
  const bool martingale_ok =
      check_applicability(model, IdentityId::MartingaleTransform).applicable;

  if (laplace_ok) {
    const auto chk = check_laplace_formula(analytics, samples, cfg.mu);
    row("laplace_formula_z", true, chk.pass, chk.z, 3.0);
  } else {
    row("laplace_formula_z", false, false, 0, 0);
  }
  if (martingale_ok) {
    const auto chk = check_martingale_identity(analytics, samples, cfg.mu, workers);
    row("martingale_identity_z", true, chk.pass, chk.z, 3.0);
    const auto mean_chk = check_mean_identity(analytics, samples, workers);
    row("mean_identity_z", true, mean_chk.pass, mean_chk.z, 3.0);
  } else {
    row("martingale_identity_z", false, false, 0, 0);
    row("mean_identity_z", false, false, 0, 0);
  }
  if (laplace_ok) {
    const auto ov = overshoot_tests(samples, model.pos_jumps.rate);
    row("overshoot_ks", true, ov.ks_pass, ov.ks_stat, ov.ks_threshold);
    row("overshoot_corr_abs", true, ov.corr_pass, std::fabs(ov.corr),
        ov.corr_threshold);
    row("overshoot_mean_z", true, ov.mean_pass,
        (ov.mean_overshoot - ov.expected_mean) / ov.mean_se, 3.0);
  } else {
    row("overshoot_ks", false, false, 0, 0);
    row("overshoot_corr_abs", false, false, 0, 0);
    row("overshoot_mean_z", false, false, 0, 0);
  }
  return any_fail ? 1 : 0;
}

}  // namespace

GridSpec parse_grid(const std::string& text) {
  GridSpec g;
  std::istringstream in(text);
  std::string part;
  std::vector<std::string> parts;
  while (std::getline(in, part, ':')) parts.push_back(part);
  if (parts.size() != 3) throw DomainError("grid: expected a:b:n, got \"" + text + "\"");
  try {
    g.lo = std::stod(parts[0]);
    g.hi = std::stod(parts[1]);
    g.n = std::stol(parts[2]);
  } catch (const std::exception&) {
    throw DomainError("grid: could not parse \"" + text + "\"");
  }
  if (g.n < 1) throw DomainError("grid: n must be >= 1");
  if (!(g.lo <= g.hi)) throw DomainError("grid: requires a <= b");
  return g;
}

int run(const RunConfig& cfg) {
  try {
    std::ofstream file;
    if (!cfg.output_path.empty()) {
      file.open(cfg.output_path);
      if (!file) throw DomainError("output: cannot open " + cfg.output_path);
    }
    std::ostream& out = cfg.output_path.empty() ? std::cout : file;
    write_config_comment(out, cfg);

    if (cfg.subcommand == "phi") return run_phi(cfg, out);
    if (cfg.subcommand == "laplace") return run_laplace(cfg, out);
    if (cfg.subcommand == "mean") return run_mean(cfg, out);
    if (cfg.subcommand == "asymptotic") return run_asymptotic(cfg, out);
    if (cfg.subcommand == "limit") return run_limit(cfg, out);
    if (cfg.subcommand == "survival") return run_survival(cfg, out);
    if (cfg.subcommand == "simulate") return run_simulate(cfg, out);
    if (cfg.subcommand == "validate") return run_validate(cfg, out);
    throw DomainError("subcommand: unknown \"" + cfg.subcommand + "\"");
  } catch (const NonConvergence& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const Divergent& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) { // DomainError included
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) { // NotApplicable, censored data, ...
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Exit times of mean-reverting processes driven by jump processes"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string u_grid, mu_grid, b_grid, z_grid, t_grid;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--model", cfg.model_path, "Model JSON file")->required();
    sub->add_option("-o,--output", cfg.output_path, "Output CSV path (default stdout)");
    sub->add_option("--quad-tol", cfg.quad_tol, "Quadrature tolerance");
    sub->add_option("--quad-max-levels", cfg.quad_max_levels, "Quadrature refinement cap");
  };

  auto* phi = app.add_subcommand("phi", "Tabulate delta, W and phi over a u grid");
  add_common(phi);
  phi->add_option("--u-grid", u_grid, "u grid a:b:n")->required();

  auto* laplace = app.add_subcommand("laplace", "Laplace transform of the exit time");
  add_common(laplace);
  laplace->add_option("--x", cfg.x, "Start level")->required();
  laplace->add_option("--b", cfg.b, "Barrier")->required();
  laplace->add_option("--mu-grid", mu_grid, "mu grid a:b:n")->required();

  auto* mean = app.add_subcommand("mean", "Mean exit time");
  add_common(mean);
  mean->add_option("--x", cfg.x, "Start level")->required();
  mean->add_option("--b", cfg.b, "Barrier")->required();

  auto* asym = app.add_subcommand("asymptotic", "Large-b asymptotic of the mean");
  add_common(asym);
  asym->add_option("--b-grid", b_grid, "b grid a:b:n")->required();

  auto* limit = app.add_subcommand("limit", "Laplace transform of tau/E(tau)");
  add_common(limit);
  limit->add_option("--x", cfg.x, "Start level")->required();
  limit->add_option("--b", cfg.b, "Barrier")->required();
  limit->add_option("--z-grid", z_grid, "z grid a:b:n")->required();

  auto* surv = app.add_subcommand("survival", "P(tau > t) by Laplace inversion");
  add_common(surv);
  surv->add_option("--x", cfg.x, "Start level")->required();
  surv->add_option("--b", cfg.b, "Barrier")->required();
  surv->add_option("--t-grid", t_grid, "t grid a:b:n")->required();
  surv->add_option("--terms", cfg.terms, "Inversion terms (even, 4..32)");

  auto* sim = app.add_subcommand("simulate", "Simulate exit samples");
  auto* val = app.add_subcommand("validate", "Monte Carlo identity checks");
  for (CLI::App* sub : {sim, val}) {
    add_common(sub);
    sub->add_option("--x", cfg.x, "Start level")->required();
    sub->add_option("--b", cfg.b, "Barrier")->required();
    sub->add_option("--n", cfg.n_paths, "Number of paths")->required();
    sub->add_option("--seed", cfg.seed, "RNG seed")->required();
    sub->add_option("--mode", cfg.mode, "jump | euler");
    sub->add_option("--dt", cfg.dt, "Euler step");
    sub->add_option("--t-max", cfg.t_max, "Censoring horizon (default auto)");
    sub->add_option("--workers", cfg.workers,
                    "Worker threads (default OUEXIT_WORKERS or 1)");
  }
  sim->add_flag("--summary", cfg.summary, "Summary row instead of per-path rows");
  val->add_option("--mu", cfg.mu, "Transform argument for the identity checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!u_grid.empty()) cfg.u_grid = parse_grid(u_grid);
    if (!mu_grid.empty()) cfg.mu_grid = parse_grid(mu_grid);
    if (!b_grid.empty()) cfg.b_grid = parse_grid(b_grid);
    if (!z_grid.empty()) cfg.z_grid = parse_grid(z_grid);
    if (!t_grid.empty()) cfg.t_grid = parse_grid(t_grid);
  } catch (const DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  }
  return run(cfg);
}

}  // namespace ouexit
