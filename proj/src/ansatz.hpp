#pragma once

#include <utility>
#include <vector>

#include "gas.hpp"
#include "ode.hpp"

namespace vfb {

// Landmarks of the (h, h_t) orbit: h_t peaks at t0, h peaks at t1 (h_t
// crosses zero there), h_t bottoms out at t2, after which both relax to 0.
struct PhaseSummary {
  double t0 = 0.0;
  double t1 = 0.0;
  double t2 = 0.0;
  double terminal_h = 0.0;
};

struct DecayReport {
  // sup over checkpoints of |d^k stretch/dt^k| * (1+t)^{k - 1/(gamma+1)},
  // indexed by k = 0..k_max; the k = 0 entry is the observed envelope
  // constant K with the (1+t)^{1/(gamma+1)} lower bound factored out.
  std::vector<double> weighted_sup;
  double K_observed = 0.0;
  // sup over t >= 1 of h / ((1+t)^{-g/(g+1)} ln(1+t)), expected <= 1.
  double h_envelope_sup = 0.0;
  // sup over t >= 1 of |h_t| / ((1+t)^{-1-g/(g+1)} ln(1+t)), expected finite.
  double ht_envelope_sup = 0.0;
};

// Corrected Lagrangian stretch g(t) solving
//   g'' + g' - g^{-gamma}/(gamma+1) = 0,  g(0) = 1,  g'(0) = 1/(gamma+1),
// together with the correction h(t) = g(t) - (1+t)^{1/(gamma+1)}.
class AnsatzTable {
 public:
  AnsatzTable(const GasParameters& p, double t_end, double rel_tol);

  double gamma() const { return p_.gamma; }
  double t_end() const { return t_end_; }
  double rel_tol() const { return rel_tol_; }

  double eta_x(double t) const;
  double eta_xt(double t) const;
  double eta_xtt(double t) const;   // from the ODE
  double eta_xttt(double t) const;  // ODE differentiated once

  // (h, h_t); requires 0 <= t <= t_end.
  std::pair<double, double> correction_h(double t) const;
  double h(double t) const { return correction_h(t).first; }
  double h_t(double t) const { return correction_h(t).second; }

  // Background stretch of the uncorrected self-similar flow.
  double background(double t) const;
  double background_t(double t) const;
  double background_tt(double t) const;

  // Max over ~50 log-spaced checkpoints of the relative mismatch between
  // eta_xt and its integral (variation-of-constants) representation.
  double duhamel_residual() const;

  // Requires t_end large enough that h_t has returned within 1e-10 of 0.
  PhaseSummary phase_portrait() const;

  DecayReport decay_envelope_check(int k_max) const;

  // Accepted integrator step times.
  const std::vector<double>& sample_times() const { return traj_.times(); }

 private:
  State2 state(double t) const;

  GasParameters p_;
  double t_end_;
  double rel_tol_;
  DenseTrajectory traj_;
};

}  // namespace vfb
