#pragma once

// Command-line entry point. Subcommands: phi, laplace, mean, asymptotic,
// limit, survival, simulate, validate. All output is CSV with a header row
// and a leading comment line recording the resolved configuration and seed.
// Exit status: 0 success, 1 validation failure, 2 input error, 3 numerical
// non-convergence.

#include <cstdint>
#include <string>

#include "ouexit/errors.hpp"

namespace ouexit {

struct GridSpec {
  double lo = 0;
  double hi = 0;
  long n = 1;
};

// "a:b:n" -> n equally spaced points from a to b inclusive.
GridSpec parse_grid(const std::string& text);

struct RunConfig {
  std::string subcommand;
  std::string model_path;
  std::string output_path; // empty: stdout
  double x = 0;
  double b = 0;
  GridSpec u_grid, mu_grid, b_grid, z_grid, t_grid;
  long n_paths = 10000;
  std::uint64_t seed = 0;
  std::string mode = "jump"; // jump | euler
  double dt = 1e-3;
  double t_max = 0; // <= 0: auto
  double mu = 1.0;  // validate: transform argument for the z checks
  int terms = 16;   // survival
  int workers = 0;  // 0: OUEXIT_WORKERS env var, else 1
  double quad_tol = 1e-10;
  int quad_max_levels = 12;
  bool summary = false; // simulate: summary row instead of per-path rows
};

int run(const RunConfig& config);

int run_cli(int argc, const char* const* argv);

}  // namespace ouexit
