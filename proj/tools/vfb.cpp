// Command line front end; talks to the core exclusively through the shared
// C API.
#include <glob.h>

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vfb/vfb.h"

namespace {

int report_api_error(vfb_status status) {
  std::fprintf(stderr, "error: %s\n", vfb_last_error());
  (void)status;
  return 3;
}

std::vector<std::string> expand_glob(const std::string& pattern) {
  glob_t g{};
  std::vector<std::string> out;
  int rc = glob(pattern.c_str(), GLOB_TILDE, nullptr, &g);
  if (rc == 0) {
    for (size_t i = 0; i < g.gl_pathc; ++i) out.emplace_back(g.gl_pathv[i]);
  }
  globfree(&g);
  if (rc == GLOB_NOMATCH || out.empty()) {
    // Treat a non-matching pattern as a literal path so error messages
    // name the missing file.
    out.push_back(pattern);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Vacuum free-boundary damped gas flow toolkit"};
  app.require_subcommand(1);

  std::string config_path, output_dir, bundle_dir;
  std::string csv_path, column, window = "10,100";
  std::string glob_pattern, summary_csv = "sweep_summary.csv";

  auto* run = app.add_subcommand("run", "Run a scenario and write its bundle");
  run->add_option("config", config_path, "key = value config file")->required();
  run->add_option("--output", output_dir, "override output_dir from the config");

  auto* ansatz = app.add_subcommand("ansatz", "Correction-trajectory study");
  ansatz->add_option("config", config_path, "key = value config file")->required();
  ansatz->add_option("--output", output_dir, "override output_dir from the config");

  auto* verify = app.add_subcommand("verify", "Re-check a written bundle");
  verify->add_option("bundle_dir", bundle_dir, "bundle directory")->required();

  auto* fit = app.add_subcommand("fit", "Log-log rate fit of a CSV column");
  fit->add_option("csv", csv_path, "CSV file with a t column")->required();
  fit->add_option("--column", column, "column to fit")->required();
  fit->add_option("--window", window, "t window as lo,hi (default 10,100)");

  auto* sweep = app.add_subcommand("sweep", "Run every config matching a glob");
  sweep->add_option("configs", glob_pattern, "config file glob")->required();
  sweep->add_option("--summary", summary_csv, "summary CSV path");

  CLI11_PARSE(app, argc, argv);

  const char* out_override = output_dir.empty() ? nullptr : output_dir.c_str();
  int exit_code = 0;

  if (run->parsed()) {
    vfb_status st = vfb_run_scenario(config_path.c_str(), out_override, &exit_code);
    if (st != VFB_OK) return report_api_error(st);
    return exit_code;
  }
  if (ansatz->parsed()) {
    vfb_status st = vfb_run_ansatz(config_path.c_str(), out_override, &exit_code);
    if (st != VFB_OK) return report_api_error(st);
    return exit_code;
  }
  if (verify->parsed()) {
    vfb_status st = vfb_verify_bundle(bundle_dir.c_str(), &exit_code);
    if (st != VFB_OK) return report_api_error(st);
    std::printf("%s\n", exit_code == 0 ? "bundle verified" : "bundle check failed");
    return exit_code;
  }
  if (fit->parsed()) {
    double lo = 0.0, hi = 0.0;
    if (std::sscanf(window.c_str(), "%lf,%lf", &lo, &hi) != 2 || !(lo < hi)) {
      std::fprintf(stderr, "error: --window expects lo,hi with lo < hi\n");
      return 3;
    }
    double exponent = 0, intercept = 0, r2 = 0;
    int n_points = 0;
    vfb_status st = vfb_fit_csv(csv_path.c_str(), column.c_str(), lo, hi,
                                &exponent, &intercept, &r2, &n_points);
    if (st != VFB_OK) return report_api_error(st);
    std::printf("column=%s window=[%.17g,%.17g] exponent=%.17g intercept=%.17g "
                "r_squared=%.17g n_points=%d\n",
                column.c_str(), lo, hi, exponent, intercept, r2, n_points);
    return 0;
  }
  if (sweep->parsed()) {
    std::vector<std::string> paths = expand_glob(glob_pattern);
    std::vector<const char*> cpaths;
    cpaths.reserve(paths.size());
    for (const auto& p : paths) cpaths.push_back(p.c_str());
    vfb_status st = vfb_sweep(cpaths.data(), cpaths.size(), summary_csv.c_str(),
                              &exit_code);
    if (st != VFB_OK) return report_api_error(st);
    std::printf("sweep summary written to %s\n", summary_csv.c_str());
    return exit_code;
  }
  return 3;
}
