#pragma once

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <string>
#include <utility>

#include "errors.hpp"

namespace vfb {

// Adaptive Gauss-Kronrod 7-15 quadrature. Returns the value and the
// absolute error estimate reported by the scheme.
template <class F>
std::pair<double, double> integrate_with_error(F&& f, double a, double b,
                                               double rel_tol = 1e-12,
                                               unsigned max_depth = 15) {
  double error = 0.0;
  double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
      std::forward<F>(f), a, b, max_depth, rel_tol, &error);
  return {value, error};
}

template <class F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-12) {
  auto [value, error] = integrate_with_error(std::forward<F>(f), a, b, rel_tol);
  if (!std::isfinite(value)) {
    throw NumericalError("quadrature produced a non-finite value on [" +
                         std::to_string(a) + ", " + std::to_string(b) + "]");
  }
  double scale = std::max(std::abs(value), 1e-30);
  if (error > 1e3 * rel_tol * scale) {
    throw NumericalError("quadrature did not converge on [" + std::to_string(a) +
                         ", " + std::to_string(b) +
                         "]: error estimate " + std::to_string(error));
  }
  return value;
}

}  // namespace vfb
