#include "gas.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"

namespace vfb {

namespace {

void require_time(double t) {
  if (!(t >= 0.0)) {
    throw DomainError("time must be nonnegative, got " + std::to_string(t));
  }
}

}  // namespace

double profile_integral(double gamma) {
  double alpha = 1.0 / (gamma - 1.0);
  // y = sin(theta) removes the endpoint singularity of (1-y^2)^alpha for
  // alpha < 1 (gamma > 2); the integrand becomes cos(theta)^(2 alpha + 1).
  constexpr double half_pi = 1.5707963267948966;
  return integrate(
      [alpha](double theta) { return std::pow(std::cos(theta), 2.0 * alpha + 1.0); },
      -half_pi, half_pi, 1e-12);
}

GasParameters derive_constants(double gamma, double mass) {
  if (!std::isfinite(gamma) || !(gamma > 1.0)) {
    throw DomainError("adiabatic exponent must satisfy gamma > 1, got " +
                      std::to_string(gamma));
  }
  if (!std::isfinite(mass) || !(mass > 0.0)) {
    throw DomainError("total mass must be positive, got " + std::to_string(mass));
  }
  GasParameters p;
  p.gamma = gamma;
  p.mass = mass;
  p.alpha = 1.0 / (gamma - 1.0);
  p.B = (gamma - 1.0) / (2.0 * gamma * (gamma + 1.0));
  double rhs = mass * std::sqrt(p.B) / profile_integral(gamma);
  p.A = std::pow(rhs, 2.0 * (gamma - 1.0) / (gamma + 1.0));
  p.half_width = std::sqrt(p.A / p.B);
  return p;
}

double barenblatt_density(const GasParameters& p, double x, double t) {
  require_time(t);
  double tau = 1.0 + t;
  double spread = std::pow(tau, -2.0 / (p.gamma + 1.0));
  // Compare |x| against the support radius directly so the density is an
  // exact zero at the boundary points, free of cancellation residue.
  double radius = p.half_width * std::pow(tau, 1.0 / (p.gamma + 1.0));
  if (std::abs(x) >= radius) return 0.0;
  double bracket = p.A - p.B * spread * x * x;
  if (bracket <= 0.0) return 0.0;
  return std::pow(tau, -1.0 / (p.gamma + 1.0)) * std::pow(bracket, p.alpha);
}

double barenblatt_velocity(const GasParameters& p, double x, double t) {
  require_time(t);
  return x / ((p.gamma + 1.0) * (1.0 + t));
}

std::pair<double, double> barenblatt_boundaries(const GasParameters& p, double t) {
  require_time(t);
  double r = p.half_width * std::pow(1.0 + t, 1.0 / (p.gamma + 1.0));
  return {-r, r};
}

double varsigma(const GasParameters& p, double x) {
  return std::max(p.A - p.B * x * x, 0.0);
}

std::pair<double, double> initial_weight(const GasParameters& p, double x) {
  if (std::abs(x) > p.half_width * (1.0 + 1e-12)) {
    throw DomainError("position " + std::to_string(x) +
                      " outside the reference interval [-L, L], L = " +
                      std::to_string(p.half_width));
  }
  double vs = varsigma(p, x);
  return {std::pow(vs, p.alpha), vs};
}

double total_mass(const GasParameters& p, double t) {
  require_time(t);
  auto [xl, xr] = barenblatt_boundaries(p, t);
  (void)xl;
  // x = x_+(t) sin(theta) regularizes the density profile at the support ends.
  constexpr double half_pi = 1.5707963267948966;
  return integrate(
      [&](double theta) {
        double x = xr * std::sin(theta);
        return barenblatt_density(p, x, t) * xr * std::cos(theta);
      },
      -half_pi, half_pi, 1e-10);
}

}  // namespace vfb
