#pragma once

#include <span>
#include <string>
#include <vector>

#include "ansatz.hpp"
#include "gas.hpp"
#include "solver.hpp"

namespace vfb {

// Deviation w = eta - x * stretch(t) and the derivatives the weighted
// functionals need. Spatial derivatives are centered differences (one-sided,
// second order, at the end nodes); w_tt and w_ttt come from the evolution
// equation and its time derivative, never from differencing snapshots.
struct PerturbationFields {
  double t = 0.0;
  double stretch = 0.0;     // corrected stretch at t
  double stretch_t = 0.0;
  std::vector<double> w, w_t;
  std::vector<double> w_x, w_tx;
  std::vector<double> w_xx, w_txx, w_xxx;
  std::vector<double> w_tt, w_ttt;
};

PerturbationFields perturbation_fields(const SolverState& state, const Grid& grid,
                                       const AnsatzTable& table,
                                       const GasParameters& p);

// Time-weighted energy of tangential order j (j <= 2), midpoint rule with the
// closed-form degenerate weights.
double energy(const PerturbationFields& f, const Grid& grid,
              const GasParameters& p, int j);

// E0 without the zero-decay \int varsigma^alpha w^2 term.
double energy_tilde0(const PerturbationFields& f, const Grid& grid,
                     const GasParameters& p);

// Mixed space norm; implemented for (j, i) in {(0,1), (1,1), (0,2)}.
double energy_mixed(const PerturbationFields& f, const Grid& grid,
                    const GasParameters& p, int j, int i);

// Truncated weighted sup-norm bundle: time derivatives j <= 2 of w, j <= 1 of
// w_x, plus the varsigma^{(gamma-1)/2} w_xx term.
double sup_bundle(const PerturbationFields& f, const Grid& grid,
                  const GasParameters& p);

struct EnergyReport {
  double t = 0.0;
  double E0 = 0.0, E1 = 0.0, E2 = 0.0;
  double E0_tilde = 0.0;
  double E01 = 0.0, E11 = 0.0, E02 = 0.0;
  double sup_bundle = 0.0;
  double elliptic_ratio_01 = 0.0;
};

EnergyReport energy_report(const PerturbationFields& f, const Grid& grid,
                           const GasParameters& p);

struct HardyResult {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};

// Midpoint-rule check of the boundary-distance Hardy inequality for a nodal
// sample F; d(x) = min(x + L, L - x) and k > 1.
HardyResult hardy_check(std::span<const double> f_nodes, const Grid& grid,
                        const GasParameters& p, double k);

// E_{j,i} / (E0_tilde + sum_{1 <= iota <= i+j} E_iota) per report; 0/0 -> 0,
// x/0 -> +inf.
std::vector<double> elliptic_ratio(std::span<const EnergyReport> reports, int j, int i);

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double t_lo = 0.0, t_hi = 0.0;
  int n_points = 0;
};

// Least-squares slope of log y against log(1+t) over the window [lo, hi].
// Requires at least 8 points with y > 0 in the window.
RateFit fit_rate(std::span<const double> t, std::span<const double> y, double lo,
                 double hi);

struct RateVerdict {
  std::string name;
  double fitted = 0.0;
  double target = 0.0;
  double tolerance = 0.0;
  double r_squared = 0.0;
  bool pass = false;
};

struct TheoremReport {
  bool conclusive = false;
  std::vector<double> times;
  std::vector<double> D_rho;            // sup |1/eta_x - (1+t)^{-1/(g+1)}| at mids
  std::vector<double> D_rho_unweighted; // sup of the plain density gap
  std::vector<double> D_u;              // sup |w_t + x h_t|
  std::vector<double> x_plus, x_minus, dxdt_plus, d2xdt2_plus;
  std::vector<RateVerdict> verdicts;
  double boundary_antisymmetry = 0.0;   // max |x_minus + x_plus| (scaled)
  bool antisymmetry_pass = false;
  bool all_pass = false;
};

// Evaluates the convergence/expansion laws on a trajectory: decay of the
// weighted density gap and of the velocity gap, the growth law of the vacuum
// boundary and of its speed, and boundary antisymmetry.
TheoremReport theorem_report(const Trajectory& traj, const Grid& grid,
                             const AnsatzTable& table, const GasParameters& p,
                             double window_lo, double window_hi);

}  // namespace vfb
