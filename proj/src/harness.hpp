#pragma once

#include <string>
#include <vector>

#include "diagnostics.hpp"
#include "gas.hpp"
#include "solver.hpp"

namespace vfb {

// Flat key=value scenario description with defaults filled in. seed is
// reserved: runs are deterministic and never consume it.
struct RunConfig {
  double gamma = 2.0;
  double mass = 1.0;
  int n_cells = 400;
  double cfl = 0.5;
  double t_end = 1e3;
  int snapshots = 64;                  // log-spaced count, first at t = 0
  std::vector<double> snapshot_times;  // explicit override when nonempty
  std::string perturbation = "polynomial";  // none | polynomial | custom
  double epsilon = 1e-3;
  int q = 1, r = 1;
  double velocity_epsilon = 0.0;
  int qv = 1, rv = 1;
  std::string custom_file;  // custom kind: CSV of w0[,w1] rows at the nodes
  double ansatz_rel_tol = 1e-10;
  double fit_window_lo = 10.0;
  double fit_window_hi = 0.0;  // 0 means t_end / 10
  std::string output_dir = "out";
  long seed = 0;
};

// t_k = (1+t_end)^{k/(n-1)} - 1 for k = 0..n-1.
std::vector<double> log_schedule(double t_end, int n);

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

PerturbationSpec make_perturbation(const RunConfig& cfg, const Grid& grid);

// Full pipeline: ansatz table, solver run, per-snapshot diagnostics,
// theorem report; writes the bundle under cfg.output_dir. Returns 0 when
// every verdict passes, 2 otherwise. Stage errors throw; the caller decides
// how to mark the bundle.
int run_scenario(const RunConfig& cfg);

// Wrapper that also writes failed.json (stage + message) on a stage error
// and maps it to exit code 3.
int run_scenario_guarded(const RunConfig& cfg);

// Correction-trajectory study: ansatz.csv and ansatz_summary.json under
// cfg.output_dir. The phase landmarks come from a second long-horizon
// integration since the orbit relaxes far beyond typical run horizons.
int ansatz_scenario(const RunConfig& cfg);

// Re-reads a bundle, refits the rate series from series.csv, and checks the
// stored report against the recomputation. Returns 0 (pass) or 2.
int verify_bundle(const std::string& dir);

// Least-squares exponent of one CSV column against the t column.
RateFit fit_csv(const std::string& path, const std::string& column, double lo,
                double hi);

struct SweepRow {
  std::string config_path;
  double gamma = 0.0, epsilon = 0.0;
  int n_cells = 0;
  std::string status;  // ok | verdict_failed | <stage error text>
  double exp_velocity_gap = 0.0, exp_density_gap = 0.0, exp_boundary = 0.0;
  bool all_pass = false;
};

// Runs each config in isolation and appends one row per config to
// summary_csv. Individual failures are recorded and the sweep continues.
// Returns 0 if every row passed, 2 if any verdict failed, 3 if any stage
// errored.
int sweep(const std::vector<std::string>& config_paths,
          const std::string& summary_csv);

}  // namespace vfb
