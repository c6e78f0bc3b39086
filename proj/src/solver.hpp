#pragma once

#include <span>
#include <vector>

#include "gas.hpp"

namespace vfb {

// Fixed Lagrangian mesh on [-L, L] with the degenerate weights sampled in
// closed form. Node layout is exactly symmetric under x -> -x.
struct Grid {
  int n_cells = 0;
  double dx = 0.0;
  std::vector<double> nodes;             // n_cells + 1
  std::vector<double> mids;              // n_cells
  std::vector<double> rho0_nodes, rho0_mids;
  std::vector<double> varsigma_nodes, varsigma_mids;
  std::vector<double> varsigma_x_nodes;  // -2 B x
};

Grid build_grid(const GasParameters& p, int n_cells);

struct PerturbationSpec {
  enum class Kind { None, Polynomial, CustomSampled };
  Kind kind = Kind::None;
  // Polynomial family: w0(x) = eps * L * (x/L)^q * (1 - (x/L)^2)^r, and the
  // same shape with its own parameters for the initial velocity offset.
  double amplitude = 0.0;
  int q = 1, r = 1;
  double velocity_amplitude = 0.0;
  int qv = 1, rv = 1;
  // CustomSampled: offsets given directly at the grid nodes.
  std::vector<double> custom_w0, custom_w1;
  // Custom samples only: reject (instead of warn) when the sampled initial
  // density profile loses the finite-slope vacuum boundary condition.
  bool strict_physical_vacuum = false;
};

struct SolverState {
  double t = 0.0;
  std::vector<double> eta, eta_t;  // at nodes
  long step_count = 0;
};

// eta = x + w0(x), eta_t = x/(gamma+1) + w1(x); throws if the initial flow
// map is not strictly increasing.
SolverState init_state(const Grid& grid, const PerturbationSpec& spec,
                       const GasParameters& p);

// Nodal eta_tt. Interior nodes difference the face fluxes
// varsigma_mid^{alpha+1} * eta_x_mid^{-gamma}; the two boundary nodes use the
// nondegenerate expanded form -eta_t - (alpha+1) varsigma_x eta_x^{-gamma}
// with a one-sided second-order eta_x.
void acceleration(const Grid& grid, const SolverState& state,
                  const GasParameters& p, std::span<double> out);

// cfl * dx / max_mids sqrt(gamma varsigma) eta_x^{-(gamma+1)/2}, floored at 1e-12.
double cfl_dt(const Grid& grid, const SolverState& state, const GasParameters& p,
              double cfl);

// One classical RK4 step, damping included in every stage. Throws StateError
// (with time and node index) if strict monotonicity of eta is lost.
void step(const Grid& grid, SolverState& state, const GasParameters& p, double dt);

struct Snapshot {
  double t = 0.0;
  std::vector<double> eta, eta_t;
};

struct Trajectory {
  std::vector<Snapshot> snapshots;
};

// Steps with the CFL time step, landing exactly on each requested snapshot
// time. snapshot_times must be sorted, nonnegative, and end at t_end.
Trajectory run(const GasParameters& p, const Grid& grid,
               const PerturbationSpec& spec, double t_end,
               std::span<const double> snapshot_times, double cfl);

struct PhysicalFields {
  std::vector<double> positions;      // eta at nodes
  std::vector<double> density_mids;   // rho0_mid / eta_x_mid
  std::vector<double> velocity_nodes; // eta_t
  double x_minus = 0.0, x_plus = 0.0; // vacuum boundaries eta(-L), eta(+L)
};

PhysicalFields physical_fields(const Grid& grid, const SolverState& state,
                               const GasParameters& p);

}  // namespace vfb
