#include "solver.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "errors.hpp"

namespace vfb {

namespace {

void check_monotone(const std::vector<double>& eta, double t) {
  for (std::size_t i = 0; i + 1 < eta.size(); ++i) {
    if (!(eta[i + 1] > eta[i])) {
      throw StateError("flow map lost strict monotonicity at t = " +
                       std::to_string(t) + ", node " + std::to_string(i));
    }
  }
}

double shape_poly(double s, double eps, double L, int q, int r) {
  return eps * L * std::pow(s, q) * std::pow(1.0 - s * s, r);
}

}  // namespace

Grid build_grid(const GasParameters& p, int n_cells) {
  if (n_cells < 16 || n_cells % 2 != 0) {
    throw ConfigError("cell count must be even and >= 16, got " +
                      std::to_string(n_cells));
  }
  Grid g;
  g.n_cells = n_cells;
  g.dx = 2.0 * p.half_width / n_cells;
  g.nodes.resize(n_cells + 1);
  g.mids.resize(n_cells);
  int half = n_cells / 2;
  for (int i = 0; i <= n_cells; ++i) g.nodes[i] = (i - half) * g.dx;
  for (int j = 0; j < n_cells; ++j) g.mids[j] = (j - half + 0.5) * g.dx;

  g.rho0_nodes.resize(n_cells + 1);
  g.varsigma_nodes.resize(n_cells + 1);
  g.varsigma_x_nodes.resize(n_cells + 1);
  for (int i = 0; i <= n_cells; ++i) {
    double vs = varsigma(p, g.nodes[i]);
    if (i == 0 || i == n_cells) vs = 0.0;  // exact vacuum at the end nodes
    g.varsigma_nodes[i] = vs;
    g.rho0_nodes[i] = std::pow(vs, p.alpha);
    g.varsigma_x_nodes[i] = -2.0 * p.B * g.nodes[i];
  }
  g.rho0_mids.resize(n_cells);
  g.varsigma_mids.resize(n_cells);
  for (int j = 0; j < n_cells; ++j) {
    double vs = varsigma(p, g.mids[j]);
    g.varsigma_mids[j] = vs;
    g.rho0_mids[j] = std::pow(vs, p.alpha);
  }
  return g;
}

SolverState init_state(const Grid& grid, const PerturbationSpec& spec,
                       const GasParameters& p) {
  int n = grid.n_cells;
  SolverState st;
  st.t = 0.0;
  st.eta.resize(n + 1);
  st.eta_t.resize(n + 1);
  double L = p.half_width;
  for (int i = 0; i <= n; ++i) {
    double x = grid.nodes[i];
    double w0 = 0.0, w1 = 0.0;
    switch (spec.kind) {
      case PerturbationSpec::Kind::None:
        break;
      case PerturbationSpec::Kind::Polynomial:
        w0 = shape_poly(x / L, spec.amplitude, L, spec.q, spec.r);
        w1 = shape_poly(x / L, spec.velocity_amplitude, L, spec.qv, spec.rv);
        break;
      case PerturbationSpec::Kind::CustomSampled:
        if (spec.custom_w0.size() != std::size_t(n + 1) ||
            (!spec.custom_w1.empty() && spec.custom_w1.size() != std::size_t(n + 1))) {
          throw ConfigError("custom perturbation samples must match the node count");
        }
        w0 = spec.custom_w0[i];
        w1 = spec.custom_w1.empty() ? 0.0 : spec.custom_w1[i];
        break;
    }
    st.eta[i] = x + w0;
    st.eta_t[i] = x / (p.gamma + 1.0) + w1;
  }
  for (int i = 0; i < n; ++i) {
    if (!(st.eta[i + 1] > st.eta[i])) {
      throw StateError("perturbation too large: initial flow map not strictly "
                       "increasing near node " + std::to_string(i));
    }
  }
  if (spec.kind == PerturbationSpec::Kind::CustomSampled) {
    // Finite-slope vacuum condition on the sampled initial density: the
    // one-sided slope of rho^{gamma-1} at each end must stay away from 0
    // and infinity. With the closed-form background this reduces to the
    // one-sided stretch being moderate.
    double dx = grid.dx;
    double ex_l = (-3.0 * st.eta[0] + 4.0 * st.eta[1] - st.eta[2]) / (2.0 * dx);
    double ex_r = (3.0 * st.eta[n] - 4.0 * st.eta[n - 1] + st.eta[n - 2]) / (2.0 * dx);
    for (double ex : {ex_l, ex_r}) {
      double slope = std::abs(grid.varsigma_x_nodes[n]) / std::pow(ex, p.gamma - 1.0);
      if (!(slope > 1e-8 && slope < 1e8)) {
        const char* msg = "sampled initial density loses the finite-slope "
                          "vacuum boundary condition";
        if (spec.strict_physical_vacuum) throw StateError(msg);
        std::fprintf(stderr, "warning: %s\n", msg);
      }
    }
  }
  return st;
}

void acceleration(const Grid& grid, const SolverState& state,
                  const GasParameters& p, std::span<double> out) {
  int n = grid.n_cells;
  double dx = grid.dx;
  double gamma = p.gamma;

  // Face fluxes between nodes j and j+1.
  static thread_local std::vector<double> flux;
  flux.resize(n);
  for (int j = 0; j < n; ++j) {
    double ex = (state.eta[j + 1] - state.eta[j]) / dx;
    if (!(ex > 0.0)) {
      throw StateError("nonpositive stretch in acceleration at t = " +
                       std::to_string(state.t) + ", face " + std::to_string(j));
    }
    flux[j] = std::pow(grid.varsigma_mids[j], p.alpha + 1.0) * std::pow(ex, -gamma);
  }
  for (int i = 1; i < n; ++i) {
    out[i] = -state.eta_t[i] - (flux[i] - flux[i - 1]) / (dx * grid.rho0_nodes[i]);
  }
  // Boundary nodes: the flux divergence over rho0 is 0/0 at varsigma = 0;
  // the expanded form -(alpha+1) varsigma_x eta_x^{-gamma} is regular there.
  double ex_left = (-3.0 * state.eta[0] + 4.0 * state.eta[1] - state.eta[2]) / (2.0 * dx);
  double ex_right = (3.0 * state.eta[n] - 4.0 * state.eta[n - 1] + state.eta[n - 2]) / (2.0 * dx);
  if (!(ex_left > 0.0) || !(ex_right > 0.0)) {
    throw StateError("nonpositive one-sided stretch at a boundary node, t = " +
                     std::to_string(state.t));
  }
  out[0] = -state.eta_t[0] -
           (p.alpha + 1.0) * grid.varsigma_x_nodes[0] * std::pow(ex_left, -gamma);
  out[n] = -state.eta_t[n] -
           (p.alpha + 1.0) * grid.varsigma_x_nodes[n] * std::pow(ex_right, -gamma);
}

double cfl_dt(const Grid& grid, const SolverState& state, const GasParameters& p,
              double cfl) {
  if (!(cfl > 0.0 && cfl <= 1.0)) {
    throw ConfigError("cfl must lie in (0, 1], got " + std::to_string(cfl));
  }
  int n = grid.n_cells;
  double max_speed = 0.0;
  for (int j = 0; j < n; ++j) {
    double ex = (state.eta[j + 1] - state.eta[j]) / grid.dx;
    double speed = std::sqrt(p.gamma * grid.varsigma_mids[j]) *
                   std::pow(ex, -(p.gamma + 1.0) / 2.0);
    max_speed = std::max(max_speed, speed);
  }
  double dt = cfl * grid.dx / max_speed;
  return std::max(dt, 1e-12);
}

void step(const Grid& grid, SolverState& state, const GasParameters& p, double dt) {
  int n = grid.n_cells;
  static thread_local std::vector<double> a1, a2, a3, a4;
  static thread_local SolverState work;
  a1.resize(n + 1);
  a2.resize(n + 1);
  a3.resize(n + 1);
  a4.resize(n + 1);
  work.eta.resize(n + 1);
  work.eta_t.resize(n + 1);

  const auto& eta = state.eta;
  const auto& vel = state.eta_t;

  acceleration(grid, state, p, a1);  // stage 1 at (eta, vel)

  work.t = state.t + 0.5 * dt;
  for (int i = 0; i <= n; ++i) {
    work.eta[i] = eta[i] + 0.5 * dt * vel[i];
    work.eta_t[i] = vel[i] + 0.5 * dt * a1[i];
  }
  acceleration(grid, work, p, a2);
  std::vector<double> v2 = work.eta_t;

  for (int i = 0; i <= n; ++i) {
    work.eta[i] = eta[i] + 0.5 * dt * v2[i];
    work.eta_t[i] = vel[i] + 0.5 * dt * a2[i];
  }
  acceleration(grid, work, p, a3);
  std::vector<double> v3 = work.eta_t;

  work.t = state.t + dt;
  for (int i = 0; i <= n; ++i) {
    work.eta[i] = eta[i] + dt * v3[i];
    work.eta_t[i] = vel[i] + dt * a3[i];
  }
  acceleration(grid, work, p, a4);

  for (int i = 0; i <= n; ++i) {
    double k_eta = (vel[i] + 2.0 * v2[i] + 2.0 * v3[i] + work.eta_t[i]) / 6.0;
    double k_vel = (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]) / 6.0;
    state.eta[i] += dt * k_eta;
    state.eta_t[i] += dt * k_vel;
  }
  state.t += dt;
  state.step_count += 1;
  check_monotone(state.eta, state.t);
}

Trajectory run(const GasParameters& p, const Grid& grid,
               const PerturbationSpec& spec, double t_end,
               std::span<const double> snapshot_times, double cfl) {
  for (std::size_t k = 0; k < snapshot_times.size(); ++k) {
    if (snapshot_times[k] < 0.0 || snapshot_times[k] > t_end * (1.0 + 1e-12) ||
        (k > 0 && snapshot_times[k] <= snapshot_times[k - 1])) {
      throw ConfigError("snapshot times must be strictly increasing within [0, t_end]");
    }
  }
  SolverState state = init_state(grid, spec, p);
  Trajectory traj;
  auto record = [&](const SolverState& s) {
    traj.snapshots.push_back(Snapshot{s.t, s.eta, s.eta_t});
  };
  for (double ts : snapshot_times) {
    while (state.t < ts * (1.0 - 1e-14) && ts - state.t > 1e-13) {
      double dt = std::min(cfl_dt(grid, state, p, cfl), ts - state.t);
      step(grid, state, p, dt);
    }
    state.t = ts;  // absorb the final roundoff sliver
    record(state);
  }
  if (snapshot_times.empty()) record(state);
  return traj;
}

PhysicalFields physical_fields(const Grid& grid, const SolverState& state,
                               const GasParameters& p) {
  (void)p;
  int n = grid.n_cells;
  check_monotone(state.eta, state.t);
  PhysicalFields f;
  f.positions = state.eta;
  f.velocity_nodes = state.eta_t;
  f.density_mids.resize(n);
  for (int j = 0; j < n; ++j) {
    double ex = (state.eta[j + 1] - state.eta[j]) / grid.dx;
    f.density_mids[j] = grid.rho0_mids[j] / ex;
  }
  f.x_minus = state.eta[0];
  f.x_plus = state.eta[n];
  return f;
}

}  // namespace vfb
