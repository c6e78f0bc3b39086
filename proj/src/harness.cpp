#include "harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "ansatz.hpp"
#include "errors.hpp"

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace vfb {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as a number");
  }
}

long parse_long(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long x = std::stol(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': cannot parse '" + v + "' as an integer");
  }
}

ordered_json constants_json(const GasParameters& p) {
  ordered_json c;
  c["gamma"] = p.gamma;
  c["mass"] = p.mass;
  c["A"] = p.A;
  c["B"] = p.B;
  c["L"] = p.half_width;
  c["alpha"] = p.alpha;
  return c;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// CSV reader for our own outputs: '#' comment lines, one header row,
// numeric fields only.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::vector<double> column(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == name) {
        std::vector<double> out;
        out.reserve(rows.size());
        for (const auto& r : rows) out.push_back(r[c]);
        return out;
      }
    }
    throw ConfigError("column '" + name + "' not found");
  }
};

Table read_table(const fs::path& path) {
  std::istringstream in(read_text(path));
  Table t;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> fields;
    std::stringstream ls(line);
    std::string f;
    while (std::getline(ls, f, ',')) fields.push_back(trim(f));
    if (!have_header) {
      t.columns = fields;
      have_header = true;
      continue;
    }
    std::vector<double> row;
    for (std::size_t c = 0; c < fields.size(); ++c) {
      // Non-numeric fields (paths, status text) read as NaN; numeric users
      // reject NaN downstream.
      try {
        row.push_back(fields[c].empty() ? std::nan("")
                                        : parse_double(t.columns[c], fields[c]));
      } catch (const ConfigError&) {
        row.push_back(std::nan(""));
      }
    }
    row.resize(t.columns.size(), std::nan(""));
    t.rows.push_back(std::move(row));
  }
  if (!have_header) throw IoError("no header row in " + path.string());
  return t;
}

struct BundleData {
  GasParameters p;
  TheoremReport report;
  double separable_error = -1.0;  // exact runs only
};

ordered_json report_json(const RunConfig& cfg, const BundleData& b) {
  ordered_json j;
  j["constants"] = constants_json(b.p);
  ordered_json run;
  run["n_cells"] = cfg.n_cells;
  run["cfl"] = cfg.cfl;
  run["t_end"] = cfg.t_end;
  run["perturbation"] = cfg.perturbation;
  run["epsilon"] = cfg.epsilon;
  run["ansatz_rel_tol"] = cfg.ansatz_rel_tol;
  j["run"] = run;
  double hi = cfg.fit_window_hi > 0.0 ? cfg.fit_window_hi : cfg.t_end / 10.0;
  j["fit_window"] = {cfg.fit_window_lo, hi};
  j["conclusive"] = b.report.conclusive;
  ordered_json verdicts = ordered_json::array();
  for (const auto& v : b.report.verdicts) {
    ordered_json e;
    e["name"] = v.name;
    e["fitted"] = v.fitted;
    e["target"] = v.target;
    e["tolerance"] = v.tolerance;
    e["r_squared"] = v.r_squared;
    e["pass"] = v.pass;
    verdicts.push_back(e);
  }
  j["verdicts"] = verdicts;
  j["boundary_antisymmetry"] = b.report.boundary_antisymmetry;
  j["antisymmetry_pass"] = b.report.antisymmetry_pass;
  if (b.separable_error >= 0.0) j["separable_error"] = b.separable_error;
  j["all_pass"] = b.report.all_pass;
  return j;
}

void write_snapshot(const fs::path& path, const GasParameters& p,
                    const Grid& grid, const Snapshot& snap) {
  std::ostringstream out;
  out << "# gamma=" << g17(p.gamma) << " mass=" << g17(p.mass)
      << " A=" << g17(p.A) << " B=" << g17(p.B) << " L=" << g17(p.half_width)
      << " n_cells=" << grid.n_cells << " t=" << g17(snap.t) << "\n";
  out << "x_lagrangian,eta,eta_t,density_mid\n";
  for (int i = 0; i <= grid.n_cells; ++i) {
    out << g17(grid.nodes[i]) << ',' << g17(snap.eta[i]) << ','
        << g17(snap.eta_t[i]) << ',';
    if (i < grid.n_cells) {
      double ex = (snap.eta[i + 1] - snap.eta[i]) / grid.dx;
      out << g17(grid.rho0_mids[i] / ex);
    }
    out << '\n';
  }
  write_text(path, out.str());
}

// The full pipeline with stage provenance for error reporting.
BundleData run_bundle(const RunConfig& cfg, std::string& stage) {
  stage = "constants";
  BundleData b;
  b.p = derive_constants(cfg.gamma, cfg.mass);

  stage = "ansatz";
  AnsatzTable table(b.p, cfg.t_end, cfg.ansatz_rel_tol);

  stage = "solver";
  Grid grid = build_grid(b.p, cfg.n_cells);
  PerturbationSpec spec = make_perturbation(cfg, grid);
  std::vector<double> schedule = cfg.snapshot_times.empty()
                                     ? log_schedule(cfg.t_end, cfg.snapshots)
                                     : cfg.snapshot_times;
  Trajectory traj = run(b.p, grid, spec, cfg.t_end, schedule, cfg.cfl);

  stage = "diagnostics";
  std::vector<EnergyReport> energies;
  energies.reserve(traj.snapshots.size());
  for (const auto& snap : traj.snapshots) {
    SolverState st;
    st.t = snap.t;
    st.eta = snap.eta;
    st.eta_t = snap.eta_t;
    energies.push_back(
        energy_report(perturbation_fields(st, grid, table, b.p), grid, b.p));
  }
  double hi = cfg.fit_window_hi > 0.0 ? cfg.fit_window_hi : cfg.t_end / 10.0;
  b.report = theorem_report(traj, grid, table, b.p, cfg.fit_window_lo, hi);

  if (spec.kind == PerturbationSpec::Kind::None) {
    const Snapshot& last = traj.snapshots.back();
    double gx = table.eta_x(last.t);
    double worst = 0.0;
    for (int i = 0; i <= grid.n_cells; ++i) {
      worst = std::max(worst, std::abs(last.eta[i] - grid.nodes[i] * gx));
    }
    b.separable_error = worst / (b.p.half_width * gx);
  }

  stage = "io";
  fs::path dir(cfg.output_dir);
  fs::create_directories(dir / "snapshots");

  std::ostringstream series;
  series << "t,E0,E0_tilde,E1,E2,E01,E11,sup_bundle,D_rho,D_u,x_plus,x_minus,"
            "elliptic_ratio_01\n";
  for (std::size_t k = 0; k < energies.size(); ++k) {
    const auto& e = energies[k];
    series << g17(e.t) << ',' << g17(e.E0) << ',' << g17(e.E0_tilde) << ','
           << g17(e.E1) << ',' << g17(e.E2) << ',' << g17(e.E01) << ','
           << g17(e.E11) << ',' << g17(e.sup_bundle) << ','
           << g17(b.report.D_rho[k]) << ',' << g17(b.report.D_u[k]) << ','
           << g17(b.report.x_plus[k]) << ',' << g17(b.report.x_minus[k]) << ','
           << g17(e.elliptic_ratio_01) << '\n';
  }
  write_text(dir / "series.csv", series.str());

  std::ostringstream index;
  index << "t,path\n";
  for (std::size_t k = 0; k < traj.snapshots.size(); ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "snap_%04zu.csv", k);
    write_snapshot(dir / "snapshots" / name, b.p, grid, traj.snapshots[k]);
    index << g17(traj.snapshots[k].t) << ',' << "snapshots/" << name << '\n';
  }
  write_text(dir / "snapshots" / "index.csv", index.str());

  write_text(dir / "theorem_report.json", report_json(cfg, b).dump(2) + "\n");
  return b;
}

}  // namespace

std::vector<double> log_schedule(double t_end, int n) {
  if (n < 2) throw ConfigError("snapshot count must be >= 2, got " + std::to_string(n));
  std::vector<double> ts(n);
  double le = std::log1p(t_end);
  for (int k = 0; k < n; ++k) ts[k] = std::expm1(le * double(k) / double(n - 1));
  ts.front() = 0.0;
  ts.back() = t_end;
  return ts;
}

RunConfig parse_config(const std::string& text) {
  RunConfig cfg;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string line = raw;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    std::string val = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("duplicate key '" + key + "'");

    if (key == "gamma") cfg.gamma = parse_double(key, val);
    else if (key == "mass") cfg.mass = parse_double(key, val);
    else if (key == "n_cells") cfg.n_cells = int(parse_long(key, val));
    else if (key == "cfl") cfg.cfl = parse_double(key, val);
    else if (key == "t_end") cfg.t_end = parse_double(key, val);
    else if (key == "snapshots") cfg.snapshots = int(parse_long(key, val));
    else if (key == "snapshot_times") {
      std::stringstream ls(val);
      std::string f;
      while (std::getline(ls, f, ',')) {
        cfg.snapshot_times.push_back(parse_double(key, trim(f)));
      }
    } else if (key == "perturbation") cfg.perturbation = val;
    else if (key == "epsilon") cfg.epsilon = parse_double(key, val);
    else if (key == "q") cfg.q = int(parse_long(key, val));
    else if (key == "r") cfg.r = int(parse_long(key, val));
    else if (key == "velocity_epsilon") cfg.velocity_epsilon = parse_double(key, val);
    else if (key == "qv") cfg.qv = int(parse_long(key, val));
    else if (key == "rv") cfg.rv = int(parse_long(key, val));
    else if (key == "custom_file") cfg.custom_file = val;
    else if (key == "ansatz_rel_tol") cfg.ansatz_rel_tol = parse_double(key, val);
    else if (key == "fit_window_lo") cfg.fit_window_lo = parse_double(key, val);
    else if (key == "fit_window_hi") cfg.fit_window_hi = parse_double(key, val);
    else if (key == "output_dir") cfg.output_dir = val;
    else if (key == "seed") cfg.seed = parse_long(key, val);
    else throw ConfigError("unknown key '" + key + "'");
  }

  if (!(cfg.gamma > 1.0)) {
    throw ConfigError("key 'gamma': adiabatic exponent must exceed 1, got " +
                      g17(cfg.gamma));
  }
  if (!(cfg.mass > 0.0)) throw ConfigError("key 'mass': must be positive");
  if (cfg.n_cells < 16 || cfg.n_cells % 2 != 0) {
    throw ConfigError("key 'n_cells': must be even and >= 16, got " +
                      std::to_string(cfg.n_cells));
  }
  if (!(cfg.cfl > 0.0 && cfg.cfl <= 1.0)) {
    throw ConfigError("key 'cfl': must lie in (0, 1]");
  }
  if (!(cfg.t_end > 0.0)) throw ConfigError("key 't_end': must be positive");
  if (cfg.snapshots < 2) throw ConfigError("key 'snapshots': must be >= 2");
  if (!std::isfinite(cfg.epsilon)) throw ConfigError("key 'epsilon': must be finite");
  if (cfg.q < 1 || cfg.r < 1 || cfg.qv < 1 || cfg.rv < 1) {
    throw ConfigError("keys 'q','r','qv','rv' must be integers >= 1");
  }
  if (!(cfg.ansatz_rel_tol >= 1e-13 && cfg.ansatz_rel_tol <= 1e-6)) {
    throw ConfigError("key 'ansatz_rel_tol': must lie in [1e-13, 1e-6]");
  }
  if (cfg.perturbation != "none" && cfg.perturbation != "polynomial" &&
      cfg.perturbation != "custom") {
    throw ConfigError("key 'perturbation': expected none, polynomial, or custom");
  }
  if (cfg.perturbation == "custom" && cfg.custom_file.empty()) {
    throw ConfigError("key 'custom_file': required when perturbation = custom");
  }
  if (cfg.fit_window_lo < 0.0 ||
      (cfg.fit_window_hi > 0.0 && cfg.fit_window_hi <= cfg.fit_window_lo)) {
    throw ConfigError("keys 'fit_window_lo'/'fit_window_hi': need 0 <= lo < hi");
  }
  for (std::size_t k = 0; k < cfg.snapshot_times.size(); ++k) {
    if (cfg.snapshot_times[k] < 0.0 || cfg.snapshot_times[k] > cfg.t_end ||
        (k > 0 && cfg.snapshot_times[k] <= cfg.snapshot_times[k - 1])) {
      throw ConfigError("key 'snapshot_times': must be strictly increasing "
                        "within [0, t_end]");
    }
  }
  return cfg;
}

RunConfig load_config(const std::string& path) {
  return parse_config(read_text(path));
}

PerturbationSpec make_perturbation(const RunConfig& cfg, const Grid& grid) {
  PerturbationSpec spec;
  if (cfg.perturbation == "none") {
    spec.kind = PerturbationSpec::Kind::None;
  } else if (cfg.perturbation == "polynomial") {
    spec.kind = PerturbationSpec::Kind::Polynomial;
    spec.amplitude = cfg.epsilon;
    spec.q = cfg.q;
    spec.r = cfg.r;
    spec.velocity_amplitude = cfg.velocity_epsilon;
    spec.qv = cfg.qv;
    spec.rv = cfg.rv;
  } else {
    spec.kind = PerturbationSpec::Kind::CustomSampled;
    std::istringstream in(read_text(cfg.custom_file));
    std::string line;
    while (std::getline(in, line)) {
      line = trim(line);
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ls(line);
      std::string f;
      std::vector<double> vals;
      while (std::getline(ls, f, ',')) vals.push_back(parse_double("custom_file", trim(f)));
      if (vals.empty() || vals.size() > 2) {
        throw ConfigError("custom_file rows must be 'w0' or 'w0,w1'");
      }
      spec.custom_w0.push_back(vals[0]);
      spec.custom_w1.push_back(vals.size() > 1 ? vals[1] : 0.0);
    }
    if (spec.custom_w0.size() != std::size_t(grid.n_cells + 1)) {
      throw ConfigError("custom_file must have exactly n_cells + 1 rows");
    }
  }
  return spec;
}

int run_scenario(const RunConfig& cfg) {
  std::string stage;
  BundleData b = run_bundle(cfg, stage);
  return b.report.all_pass ? 0 : 2;
}

int run_scenario_guarded(const RunConfig& cfg) {
  std::string stage = "setup";
  try {
    BundleData b = run_bundle(cfg, stage);
    return b.report.all_pass ? 0 : 2;
  } catch (const Error& e) {
    ordered_json j;
    j["stage"] = stage;
    j["message"] = e.what();
    try {
      fs::create_directories(cfg.output_dir);
      write_text(fs::path(cfg.output_dir) / "failed.json", j.dump(2) + "\n");
    } catch (...) {
      // marking failed is best effort; the original error wins
    }
    std::fprintf(stderr, "error (%s stage): %s\n", stage.c_str(), e.what());
    return 3;
  }
}

int ansatz_scenario(const RunConfig& cfg) {
  GasParameters p = derive_constants(cfg.gamma, cfg.mass);
  AnsatzTable table(p, cfg.t_end, cfg.ansatz_rel_tol);
  DecayReport decay = table.decay_envelope_check(3);
  double residual = table.duhamel_residual();

  // Landmarks live on a much longer horizon: the orbit needs ~1e7 time
  // units to relax within 1e-10.
  double t_phase = std::max(cfg.t_end, 2e7);
  AnsatzTable long_table(p, t_phase, std::max(cfg.ansatz_rel_tol, 1e-10));
  PhaseSummary phases = long_table.phase_portrait();

  fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  std::ostringstream csv;
  csv << "t,eta_x,eta_xt,eta_xtt,h,h_t,envelope_ratio_h,envelope_ratio_ht\n";
  double gp1 = p.gamma + 1.0;
  for (double t : log_schedule(cfg.t_end, 512)) {
    auto [h, ht] = table.correction_h(t);
    double rh = 0.0, rht = 0.0;
    if (t >= 1.0) {
      double tau = 1.0 + t;
      rh = h / (std::pow(tau, -p.gamma / gp1) * std::log(tau));
      rht = std::abs(ht) / (std::pow(tau, -1.0 - p.gamma / gp1) * std::log(tau));
    }
    csv << g17(t) << ',' << g17(table.eta_x(t)) << ',' << g17(table.eta_xt(t))
        << ',' << g17(table.eta_xtt(t)) << ',' << g17(h) << ',' << g17(ht)
        << ',' << g17(rh) << ',' << g17(rht) << '\n';
  }
  write_text(dir / "ansatz.csv", csv.str());

  ordered_json j;
  j["constants"] = constants_json(p);
  j["t_end"] = cfg.t_end;
  j["rel_tol"] = cfg.ansatz_rel_tol;
  j["K_observed"] = decay.K_observed;
  j["t0"] = phases.t0;
  j["t1"] = phases.t1;
  j["t2"] = phases.t2;
  j["terminal_h"] = phases.terminal_h;
  j["duhamel_residual"] = residual;
  j["h_envelope_sup"] = decay.h_envelope_sup;
  j["ht_envelope_sup"] = decay.ht_envelope_sup;
  j["weighted_derivative_sup"] = decay.weighted_sup;
  write_text(dir / "ansatz_summary.json", j.dump(2) + "\n");
  return 0;
}

int verify_bundle(const std::string& dir) {
  fs::path root(dir);
  if (fs::exists(root / "failed.json")) {
    std::fprintf(stderr, "bundle is marked failed\n");
    return 3;
  }
  ordered_json rep = ordered_json::parse(read_text(root / "theorem_report.json"));
  Table series = read_table(root / "series.csv");
  auto t = series.column("t");

  double lo = rep.at("fit_window").at(0).get<double>();
  double hi = rep.at("fit_window").at(1).get<double>();

  const std::map<std::string, std::string> column_of = {
      {"velocity_gap", "D_u"},
      {"weighted_density_gap", "D_rho"},
      {"boundary_growth", "x_plus"},
  };
  bool ok = true;
  for (const auto& v : rep.at("verdicts")) {
    std::string name = v.at("name").get<std::string>();
    auto it = column_of.find(name);
    if (it != column_of.end()) {
      RateFit refit = fit_rate(t, series.column(it->second), lo, hi);
      if (std::abs(refit.exponent - v.at("fitted").get<double>()) > 1e-9) {
        std::fprintf(stderr, "verify: stored exponent for %s disagrees with refit\n",
                     name.c_str());
        ok = false;
      }
    }
    double fitted = v.at("fitted").get<double>();
    double target = v.at("target").get<double>();
    double tol = v.at("tolerance").get<double>();
    bool two_sided = (name == "boundary_growth");
    bool expect = two_sided ? std::abs(fitted - target) <= tol
                            : fitted <= target + tol;
    if (expect != v.at("pass").get<bool>()) {
      std::fprintf(stderr, "verify: stored verdict for %s is inconsistent\n",
                   name.c_str());
      ok = false;
    }
    ok = ok && v.at("pass").get<bool>();
  }

  auto xp = series.column("x_plus");
  auto xm = series.column("x_minus");
  for (std::size_t k = 0; k < xp.size(); ++k) {
    if (std::abs(xm[k] + xp[k]) > 1e-10 * std::max(1.0, std::abs(xp[k]))) {
      std::fprintf(stderr, "verify: boundary antisymmetry violated at t = %s\n",
                   g17(t[k]).c_str());
      ok = false;
    }
  }
  Table index = read_table(root / "snapshots" / "index.csv");
  if (index.rows.size() != t.size()) {
    std::fprintf(stderr, "verify: snapshot index and series length differ\n");
    ok = false;
  }
  return ok ? 0 : 2;
}

RateFit fit_csv(const std::string& path, const std::string& column, double lo,
                double hi) {
  Table table = read_table(path);
  return fit_rate(table.column("t"), table.column(column), lo, hi);
}

int sweep(const std::vector<std::string>& config_paths,
          const std::string& summary_csv) {
  if (config_paths.empty()) throw ConfigError("sweep needs at least one config");
  std::vector<SweepRow> rows;
  bool any_stage_error = false, any_verdict_fail = false;
  for (const auto& path : config_paths) {
    SweepRow row;
    row.config_path = path;
    std::string stage = "setup";
    try {
      RunConfig cfg = load_config(path);
      row.gamma = cfg.gamma;
      row.epsilon = cfg.perturbation == "none" ? 0.0 : cfg.epsilon;
      row.n_cells = cfg.n_cells;
      BundleData b = run_bundle(cfg, stage);
      for (const auto& v : b.report.verdicts) {
        if (v.name == "velocity_gap") row.exp_velocity_gap = v.fitted;
        if (v.name == "weighted_density_gap") row.exp_density_gap = v.fitted;
        if (v.name == "boundary_growth") row.exp_boundary = v.fitted;
      }
      row.all_pass = b.report.all_pass;
      row.status = row.all_pass ? "ok" : "verdict_failed";
      any_verdict_fail = any_verdict_fail || !row.all_pass;
    } catch (const Error& e) {
      row.status = stage + " stage: " + e.what();
      any_stage_error = true;
    }
    rows.push_back(row);
  }
  std::ostringstream out;
  out << "config,gamma,epsilon,n_cells,status,exp_velocity_gap,exp_density_gap,"
         "exp_boundary,all_pass\n";
  for (const auto& r : rows) {
    out << csv_field(r.config_path) << ',' << g17(r.gamma) << ','
        << g17(r.epsilon) << ',' << r.n_cells << ',' << csv_field(r.status)
        << ',' << g17(r.exp_velocity_gap) << ',' << g17(r.exp_density_gap)
        << ',' << g17(r.exp_boundary) << ',' << (r.all_pass ? 1 : 0) << '\n';
  }
  write_text(summary_csv, out.str());
  if (any_stage_error) return 3;
  return any_verdict_fail ? 2 : 0;
}

}  // namespace vfb
