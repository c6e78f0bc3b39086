#pragma once

#include <utility>

namespace vfb {

// Parameters of a damped polytropic gas together with the mass-determined
// constants of its self-similar reference solution
//   rho_ref(x, t) = (1+t)^{-1/(gamma+1)} [A - B (1+t)^{-2/(gamma+1)} x^2]^{1/(gamma-1)},
// supported on |x| <= L (1+t)^{1/(gamma+1)} with L = sqrt(A/B).
struct GasParameters {
  double gamma = 0.0;       // adiabatic exponent, > 1
  double mass = 0.0;        // total mass M, > 0
  double A = 0.0;           // amplitude constant
  double B = 0.0;           // profile constant (gamma-1)/(2 gamma (gamma+1))
  double alpha = 0.0;       // 1/(gamma-1)
  double half_width = 0.0;  // L = sqrt(A/B), initial support half-width
};

// Solves A^{(gamma+1)/(2(gamma-1))} = M sqrt(B) / Int_{-1}^{1} (1-y^2)^{1/(gamma-1)} dy
// with the profile integral evaluated adaptively to relative 1e-12.
GasParameters derive_constants(double gamma, double mass);

// The normalized profile integral above; exposed for oracle comparisons.
double profile_integral(double gamma);

// Self-similar density; 0 outside the support. Requires t >= 0.
double barenblatt_density(const GasParameters& p, double x, double t);

// x / ((gamma+1)(1+t)). Requires t >= 0.
double barenblatt_velocity(const GasParameters& p, double x, double t);

// (-L (1+t)^{1/(gamma+1)}, +L (1+t)^{1/(gamma+1)}).
std::pair<double, double> barenblatt_boundaries(const GasParameters& p, double t);

// Degenerate boundary weight, varsigma(x) = A - B x^2, clamped to 0 at |x| = L.
double varsigma(const GasParameters& p, double x);

// (rho_ref(x, 0), varsigma(x)); requires |x| <= L.
std::pair<double, double> initial_weight(const GasParameters& p, double x);

// Mass of the reference density over its support at time t, by quadrature.
double total_mass(const GasParameters& p, double t);

}  // namespace vfb
