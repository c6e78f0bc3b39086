#include "diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace vfb {

namespace {

// Nodal first derivative: centered interior, one-sided second order at ends.
std::vector<double> ddx(const std::vector<double>& v, double dx) {
  std::size_t n = v.size() - 1;
  std::vector<double> out(n + 1);
  for (std::size_t i = 1; i < n; ++i) out[i] = (v[i + 1] - v[i - 1]) / (2.0 * dx);
  out[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dx);
  out[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * dx);
  return out;
}

std::vector<double> d2dx(const std::vector<double>& v, double dx) {
  std::size_t n = v.size() - 1;
  double dx2 = dx * dx;
  std::vector<double> out(n + 1);
  for (std::size_t i = 1; i < n; ++i) out[i] = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / dx2;
  out[0] = (2.0 * v[0] - 5.0 * v[1] + 4.0 * v[2] - v[3]) / dx2;
  out[n] = (2.0 * v[n] - 5.0 * v[n - 1] + 4.0 * v[n - 2] - v[n - 3]) / dx2;
  return out;
}

std::vector<double> d3dx(const std::vector<double>& v, double dx) {
  std::size_t n = v.size() - 1;
  double dx3 = dx * dx * dx;
  std::vector<double> out(n + 1);
  for (std::size_t i = 2; i + 2 <= n; ++i) {
    out[i] = (v[i + 2] - 2.0 * v[i + 1] + 2.0 * v[i - 1] - v[i - 2]) / (-2.0 * dx3);
  }
  auto forward = [&](std::size_t i) {
    return (-2.5 * v[i] + 9.0 * v[i + 1] - 12.0 * v[i + 2] + 7.0 * v[i + 3] -
            1.5 * v[i + 4]) / dx3;
  };
  auto backward = [&](std::size_t i) {
    return (2.5 * v[i] - 9.0 * v[i - 1] + 12.0 * v[i - 2] - 7.0 * v[i - 3] +
            1.5 * v[i - 4]) / dx3;
  };
  out[0] = forward(0);
  out[1] = forward(1);
  out[n - 1] = backward(n - 1);
  out[n] = backward(n);
  return out;
}

double avg(const std::vector<double>& v, int j) { return 0.5 * (v[j] + v[j + 1]); }

}  // namespace

PerturbationFields perturbation_fields(const SolverState& state, const Grid& grid,
                                       const AnsatzTable& table,
                                       const GasParameters& p) {
  int n = grid.n_cells;
  double dx = grid.dx;
  double gamma = p.gamma;
  double t = state.t;

  PerturbationFields f;
  f.t = t;
  f.stretch = table.eta_x(t);
  f.stretch_t = table.eta_xt(t);
  double g = f.stretch, gt = f.stretch_t;

  f.w.resize(n + 1);
  f.w_t.resize(n + 1);
  for (int i = 0; i <= n; ++i) {
    f.w[i] = state.eta[i] - grid.nodes[i] * g;
    f.w_t[i] = state.eta_t[i] - grid.nodes[i] * gt;
  }
  f.w_x = ddx(f.w, dx);
  f.w_tx = ddx(f.w_t, dx);
  f.w_xx = d2dx(f.w, dx);
  f.w_txx = d2dx(f.w_t, dx);
  f.w_xxx = d3dx(f.w, dx);

  // w_tt and w_ttt from the evolution equation and its time derivative,
  // with the same interior/boundary split as the solver's acceleration.
  std::vector<double> flux_w(n), flux_wt(n);
  double g_pow = std::pow(g, -gamma);
  double g_pow1 = std::pow(g, -gamma - 1.0);
  for (int j = 0; j < n; ++j) {
    double ex = (state.eta[j + 1] - state.eta[j]) / dx;
    double ext = (state.eta_t[j + 1] - state.eta_t[j]) / dx;
    double wgt = std::pow(grid.varsigma_mids[j], p.alpha + 1.0);
    flux_w[j] = wgt * (std::pow(ex, -gamma) - g_pow);
    flux_wt[j] = wgt * (-gamma) * (std::pow(ex, -gamma - 1.0) * ext - g_pow1 * gt);
  }
  f.w_tt.resize(n + 1);
  f.w_ttt.resize(n + 1);
  for (int i = 1; i < n; ++i) {
    f.w_tt[i] = -f.w_t[i] - (flux_w[i] - flux_w[i - 1]) / (dx * grid.rho0_nodes[i]);
    f.w_ttt[i] = -f.w_tt[i] - (flux_wt[i] - flux_wt[i - 1]) / (dx * grid.rho0_nodes[i]);
  }
  double ex_l = (-3.0 * state.eta[0] + 4.0 * state.eta[1] - state.eta[2]) / (2.0 * dx);
  double ex_r = (3.0 * state.eta[n] - 4.0 * state.eta[n - 1] + state.eta[n - 2]) / (2.0 * dx);
  double ext_l = (-3.0 * state.eta_t[0] + 4.0 * state.eta_t[1] - state.eta_t[2]) / (2.0 * dx);
  double ext_r = (3.0 * state.eta_t[n] - 4.0 * state.eta_t[n - 1] + state.eta_t[n - 2]) / (2.0 * dx);
  double c = p.alpha + 1.0;
  f.w_tt[0] = -f.w_t[0] - c * grid.varsigma_x_nodes[0] * (std::pow(ex_l, -gamma) - g_pow);
  f.w_tt[n] = -f.w_t[n] - c * grid.varsigma_x_nodes[n] * (std::pow(ex_r, -gamma) - g_pow);
  f.w_ttt[0] = -f.w_tt[0] - c * grid.varsigma_x_nodes[0] * (-gamma) *
               (std::pow(ex_l, -gamma - 1.0) * ext_l - g_pow1 * gt);
  f.w_ttt[n] = -f.w_tt[n] - c * grid.varsigma_x_nodes[n] * (-gamma) *
               (std::pow(ex_r, -gamma - 1.0) * ext_r - g_pow1 * gt);
  return f;
}

double energy(const PerturbationFields& f, const Grid& grid,
              const GasParameters& p, int j) {
  if (j < 0 || j > 2) {
    throw DomainError("energy order must satisfy 0 <= j <= 2, got " +
                      std::to_string(j));
  }
  const std::vector<double>* v = nullptr;
  const std::vector<double>* vnext = nullptr;
  switch (j) {
    case 0: v = &f.w; vnext = &f.w_t; break;
    case 1: v = &f.w_t; vnext = &f.w_tt; break;
    case 2: v = &f.w_tt; vnext = &f.w_ttt; break;
  }
  double tau = 1.0 + f.t;
  double sum = 0.0;
  for (int m = 0; m < grid.n_cells; ++m) {
    double wa = std::pow(grid.varsigma_mids[m], p.alpha);
    double wa1 = std::pow(grid.varsigma_mids[m], p.alpha + 1.0);
    double vb = avg(*v, m);
    double dv = ((*v)[m + 1] - (*v)[m]) / grid.dx;
    double vn = avg(*vnext, m);
    sum += (wa * vb * vb + wa1 * dv * dv + tau * wa * vn * vn) * grid.dx;
  }
  return std::pow(tau, 2.0 * j) * sum;
}

double energy_tilde0(const PerturbationFields& f, const Grid& grid,
                     const GasParameters& p) {
  double tau = 1.0 + f.t;
  double sum = 0.0;
  for (int m = 0; m < grid.n_cells; ++m) {
    double wa = std::pow(grid.varsigma_mids[m], p.alpha);
    double wa1 = std::pow(grid.varsigma_mids[m], p.alpha + 1.0);
    double dv = (f.w[m + 1] - f.w[m]) / grid.dx;
    double vn = avg(f.w_t, m);
    sum += (wa1 * dv * dv + tau * wa * vn * vn) * grid.dx;
  }
  return sum;
}

double energy_mixed(const PerturbationFields& f, const Grid& grid,
                    const GasParameters& p, int j, int i) {
  const std::vector<double>* di = nullptr;   // d_t^j d_x^i w
  const std::vector<double>* di1 = nullptr;  // d_t^j d_x^{i+1} w
  if (j == 0 && i == 1) {
    di = &f.w_x; di1 = &f.w_xx;
  } else if (j == 1 && i == 1) {
    di = &f.w_tx; di1 = &f.w_txx;
  } else if (j == 0 && i == 2) {
    di = &f.w_xx; di1 = &f.w_xxx;
  } else {
    throw DomainError("mixed energy implemented for (j,i) in {(0,1),(1,1),(0,2)}, got (" +
                      std::to_string(j) + "," + std::to_string(i) + ")");
  }
  double tau = 1.0 + f.t;
  double sum = 0.0;
  for (int m = 0; m < grid.n_cells; ++m) {
    double w_lo = std::pow(grid.varsigma_mids[m], p.alpha + i - 1.0);
    double w_hi = std::pow(grid.varsigma_mids[m], p.alpha + i + 1.0);
    double a = avg(*di, m);
    double b = avg(*di1, m);
    sum += (w_lo * a * a + w_hi * b * b) * grid.dx;
  }
  return std::pow(tau, 2.0 * j) * sum;
}

double sup_bundle(const PerturbationFields& f, const Grid& grid,
                  const GasParameters& p) {
  double tau = 1.0 + f.t;
  double tau2 = tau * tau;
  double best = 0.0;
  for (int i = 0; i <= grid.n_cells; ++i) {
    double b = f.w[i] * f.w[i] + tau2 * f.w_t[i] * f.w_t[i] +
               tau2 * tau2 * f.w_tt[i] * f.w_tt[i];
    b += f.w_x[i] * f.w_x[i] + tau2 * f.w_tx[i] * f.w_tx[i];
    // (i, j) = (2, 0) member of the high-order family, weight varsigma^{(gamma-1)/2}.
    b += std::pow(grid.varsigma_nodes[i], p.gamma - 1.0) * f.w_xx[i] * f.w_xx[i];
    best = std::max(best, b);
  }
  return best;
}

EnergyReport energy_report(const PerturbationFields& f, const Grid& grid,
                           const GasParameters& p) {
  EnergyReport r;
  r.t = f.t;
  r.E0 = energy(f, grid, p, 0);
  r.E1 = energy(f, grid, p, 1);
  r.E2 = energy(f, grid, p, 2);
  r.E0_tilde = energy_tilde0(f, grid, p);
  r.E01 = energy_mixed(f, grid, p, 0, 1);
  r.E11 = energy_mixed(f, grid, p, 1, 1);
  r.E02 = energy_mixed(f, grid, p, 0, 2);
  r.sup_bundle = sup_bundle(f, grid, p);
  double denom = r.E0_tilde + r.E1;
  if (denom > 0.0) {
    r.elliptic_ratio_01 = r.E01 / denom;
  } else {
    r.elliptic_ratio_01 =
        (r.E01 > 0.0) ? std::numeric_limits<double>::infinity() : 0.0;
  }
  return r;
}

HardyResult hardy_check(std::span<const double> f_nodes, const Grid& grid,
                        const GasParameters& p, double k) {
  if (!(k > 1.0)) {
    throw DomainError("Hardy weight power must exceed 1, got " + std::to_string(k));
  }
  double L = p.half_width;
  HardyResult res;
  for (int m = 0; m < grid.n_cells; ++m) {
    double x = grid.mids[m];
    double d = std::min(x + L, L - x);
    double F = 0.5 * (f_nodes[m] + f_nodes[m + 1]);
    double Fx = (f_nodes[m + 1] - f_nodes[m]) / grid.dx;
    res.lhs += std::pow(d, k - 2.0) * F * F * grid.dx;
    res.rhs += std::pow(d, k) * (F * F + Fx * Fx) * grid.dx;
  }
  res.ratio = (res.rhs > 0.0) ? res.lhs / res.rhs : 0.0;
  return res;
}

std::vector<double> elliptic_ratio(std::span<const EnergyReport> reports, int j, int i) {
  std::vector<double> out;
  out.reserve(reports.size());
  for (const auto& r : reports) {
    double num = 0.0;
    if (j == 0 && i == 1) num = r.E01;
    else if (j == 1 && i == 1) num = r.E11;
    else if (j == 0 && i == 2) num = r.E02;
    else throw DomainError("elliptic ratio implemented for (j,i) in {(0,1),(1,1),(0,2)}");
    double denom = r.E0_tilde;
    int order = i + j;
    if (order >= 1) denom += r.E1;
    if (order >= 2) denom += r.E2;
    if (denom > 0.0) {
      out.push_back(num / denom);
    } else {
      out.push_back(num > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    }
  }
  return out;
}

RateFit fit_rate(std::span<const double> t, std::span<const double> y, double lo,
                 double hi) {
  if (t.size() != y.size()) throw DomainError("rate fit series lengths differ");
  std::vector<double> u, v;
  for (std::size_t k = 0; k < t.size(); ++k) {
    if (t[k] < lo || t[k] > hi) continue;
    if (!(y[k] > 0.0)) {
      throw DomainError("rate fit requires positive values; got " +
                        std::to_string(y[k]) + " at t = " + std::to_string(t[k]));
    }
    u.push_back(std::log1p(t[k]));
    v.push_back(std::log(y[k]));
  }
  if (u.size() < 8) {
    throw DomainError("rate fit needs at least 8 points in the window, got " +
                      std::to_string(u.size()));
  }
  double n = double(u.size());
  double su = 0, sv = 0, suu = 0, suv = 0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    su += u[k];
    sv += v[k];
    suu += u[k] * u[k];
    suv += u[k] * v[k];
  }
  RateFit fit;
  fit.exponent = (n * suv - su * sv) / (n * suu - su * su);
  fit.intercept = (sv - fit.exponent * su) / n;
  double ss_res = 0, ss_tot = 0, vbar = sv / n;
  for (std::size_t k = 0; k < u.size(); ++k) {
    double pred = fit.intercept + fit.exponent * u[k];
    ss_res += (v[k] - pred) * (v[k] - pred);
    ss_tot += (v[k] - vbar) * (v[k] - vbar);
  }
  fit.r_squared = (ss_tot > 0.0) ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  fit.t_lo = lo;
  fit.t_hi = hi;
  fit.n_points = int(u.size());
  return fit;
}

TheoremReport theorem_report(const Trajectory& traj, const Grid& grid,
                             const AnsatzTable& table, const GasParameters& p,
                             double window_lo, double window_hi) {
  TheoremReport rep;
  int n = grid.n_cells;
  double gp1 = p.gamma + 1.0;

  for (const auto& snap : traj.snapshots) {
    double t = snap.t;
    rep.times.push_back(t);
    double inv_bg = std::pow(1.0 + t, -1.0 / gp1);
    double d_rho = 0.0, d_rho_raw = 0.0;
    for (int j = 0; j < n; ++j) {
      double ex = (snap.eta[j + 1] - snap.eta[j]) / grid.dx;
      double gap = std::abs(1.0 / ex - inv_bg);
      d_rho = std::max(d_rho, gap);
      d_rho_raw = std::max(d_rho_raw, grid.rho0_mids[j] * gap);
    }
    rep.D_rho.push_back(d_rho);
    rep.D_rho_unweighted.push_back(d_rho_raw);

    double gt = table.eta_xt(t);
    double ht = table.correction_h(t).second;
    double d_u = 0.0;
    for (int i = 0; i <= n; ++i) {
      double w_t = snap.eta_t[i] - grid.nodes[i] * gt;
      d_u = std::max(d_u, std::abs(w_t + grid.nodes[i] * ht));
    }
    rep.D_u.push_back(d_u);
    rep.x_plus.push_back(snap.eta[n]);
    rep.x_minus.push_back(snap.eta[0]);
    rep.dxdt_plus.push_back(snap.eta_t[n]);
  }

  // Boundary acceleration from nonuniform differencing of the speed series.
  std::size_t m = rep.times.size();
  rep.d2xdt2_plus.assign(m, 0.0);
  for (std::size_t k = 1; k + 1 < m; ++k) {
    double h1 = rep.times[k] - rep.times[k - 1];
    double h2 = rep.times[k + 1] - rep.times[k];
    rep.d2xdt2_plus[k] =
        (h1 * h1 * rep.dxdt_plus[k + 1] - (h1 * h1 - h2 * h2) * rep.dxdt_plus[k] -
         h2 * h2 * rep.dxdt_plus[k - 1]) /
        (h1 * h2 * (h1 + h2));
  }
  if (m >= 3) {
    rep.d2xdt2_plus[0] = rep.d2xdt2_plus[1];
    rep.d2xdt2_plus[m - 1] = rep.d2xdt2_plus[m - 2];
  }

  double scale = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    scale = std::max(scale, std::abs(rep.x_minus[k] + rep.x_plus[k]) /
                                std::max(1.0, std::abs(rep.x_plus[k])));
  }
  rep.boundary_antisymmetry = scale;
  rep.antisymmetry_pass = scale <= 1e-10;

  double span = (1.0 + rep.times.back()) / (1.0 + rep.times.front());
  if (span < 100.0) {
    rep.conclusive = false;  // needs two decades of (1+t)
    return rep;
  }
  rep.conclusive = true;

  std::vector<double> abs_speed(rep.dxdt_plus.size());
  for (std::size_t k = 0; k < abs_speed.size(); ++k) abs_speed[k] = std::abs(rep.dxdt_plus[k]);

  struct Law {
    const char* name;
    const std::vector<double>* series;
    double target;
    double tol;
    bool two_sided;  // growth laws are pinned above and below
  };
  const Law laws[] = {
      {"velocity_gap", &rep.D_u, -1.0, 0.15, false},
      {"weighted_density_gap", &rep.D_rho, -2.0 / gp1, 0.15, false},
      {"boundary_growth", &rep.x_plus, 1.0 / gp1, 0.02, true},
      {"boundary_speed", &abs_speed, 1.0 / gp1 - 1.0, 0.05, false},
  };
  rep.all_pass = rep.antisymmetry_pass;
  for (const Law& law : laws) {
    RateFit fit = fit_rate(rep.times, *law.series, window_lo, window_hi);
    RateVerdict v;
    v.name = law.name;
    v.fitted = fit.exponent;
    v.target = law.target;
    v.tolerance = law.tol;
    v.r_squared = fit.r_squared;
    // Decay laws are upper bounds: decaying at least as fast as the target
    // passes. Growth laws must match on both sides.
    v.pass = law.two_sided ? std::abs(fit.exponent - law.target) <= law.tol
                           : fit.exponent <= law.target + law.tol;
    rep.all_pass = rep.all_pass && v.pass;
    rep.verdicts.push_back(v);
  }
  return rep;
}

}  // namespace vfb
