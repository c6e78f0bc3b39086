#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "errors.hpp"
#include "gas.hpp"

using namespace vfb;

namespace {

// Independent oracle for the normalized profile integral:
// Int_{-1}^{1} (1-y^2)^a dy = Beta(1/2, a+1) = sqrt(pi) Gamma(a+1)/Gamma(a+3/2).
double profile_oracle(double gamma) {
  double a = 1.0 / (gamma - 1.0);
  return std::exp(0.5 * std::log(M_PI) + std::lgamma(a + 1.0) -
                  std::lgamma(a + 1.5));
}

double amplitude_oracle(double gamma, double mass) {
  double B = (gamma - 1.0) / (2.0 * gamma * (gamma + 1.0));
  double rhs = mass * std::sqrt(B) / profile_oracle(gamma);
  // A^{(gamma+1)/(2(gamma-1))} = rhs
  return std::pow(rhs, 2.0 * (gamma - 1.0) / (gamma + 1.0));
}

}  // namespace

TEST_CASE("derived constants match the closed-form oracle") {
  struct Case { double gamma, mass; };
  for (Case c : {Case{2.0, 1.0}, Case{3.0, 2.0}, Case{1.5, 1.0}}) {
    CAPTURE(c.gamma);
    GasParameters p = derive_constants(c.gamma, c.mass);
    CHECK(p.B == doctest::Approx((c.gamma - 1.0) /
                                 (2.0 * c.gamma * (c.gamma + 1.0))).epsilon(1e-15));
    CHECK(p.alpha == doctest::Approx(1.0 / (c.gamma - 1.0)).epsilon(1e-15));
    CHECK(p.A == doctest::Approx(amplitude_oracle(c.gamma, c.mass)).epsilon(1e-10));
    CHECK(p.half_width == doctest::Approx(std::sqrt(p.A / p.B)).epsilon(1e-14));
    CHECK(profile_integral(c.gamma) ==
          doctest::Approx(profile_oracle(c.gamma)).epsilon(1e-12));
  }
}

TEST_CASE("gamma = 2, M = 1 landmark values") {
  GasParameters p = derive_constants(2.0, 1.0);
  CHECK(p.B == doctest::Approx(1.0 / 12.0).epsilon(1e-15));
  CHECK(p.half_width == doctest::Approx(2.080083823).epsilon(1e-8));
}

TEST_CASE("constants reject out-of-domain parameters") {
  CHECK_THROWS_AS(derive_constants(0.9, 1.0), DomainError);
  CHECK_THROWS_AS(derive_constants(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(derive_constants(2.0, 0.0), DomainError);
  CHECK_THROWS_AS(derive_constants(2.0, -1.0), DomainError);
  CHECK_NOTHROW(derive_constants(5.0, 3.0));
}

TEST_CASE("total mass is conserved in time") {
  for (double gamma : {1.5, 2.0, 3.0}) {
    CAPTURE(gamma);
    GasParameters p = derive_constants(gamma, 1.0);
    for (double t : {0.0, 1.0, 10.0}) {
      CHECK(total_mass(p, t) == doctest::Approx(1.0).epsilon(1e-8));
    }
  }
  GasParameters p = derive_constants(3.0, 2.0);
  CHECK(total_mass(p, 10.0) == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("density is self-similar") {
  GasParameters p = derive_constants(2.0, 1.0);
  for (double t : {0.5, 3.0, 40.0}) {
    double s = std::pow(1.0 + t, 1.0 / (p.gamma + 1.0));
    for (double x0 : {0.0, 0.3, 1.1, 1.9}) {
      double expect = barenblatt_density(p, x0, 0.0) / s;
      CHECK(barenblatt_density(p, x0 * s, t) == doctest::Approx(expect).epsilon(1e-13));
    }
  }
}

TEST_CASE("support boundary behavior") {
  GasParameters p = derive_constants(2.0, 1.0);
  for (double t : {0.0, 2.0, 100.0}) {
    auto [lo, hi] = barenblatt_boundaries(p, t);
    CHECK(lo == doctest::Approx(-hi).epsilon(1e-15));
    CHECK(hi == doctest::Approx(p.half_width *
                                std::pow(1.0 + t, 1.0 / 3.0)).epsilon(1e-14));
    CHECK(barenblatt_density(p, hi, t) == 0.0);
    CHECK(barenblatt_density(p, hi * 1.01, t) == 0.0);
    CHECK(barenblatt_density(p, -hi * 1.5, t) == 0.0);
    CHECK(barenblatt_density(p, hi * 0.999, t) > 0.0);
    CHECK(barenblatt_density(p, 0.0, t) > 0.0);
  }
  CHECK_THROWS_AS(barenblatt_density(p, 0.0, -0.1), DomainError);
  CHECK_THROWS_AS(barenblatt_velocity(p, 0.0, -0.1), DomainError);
}

TEST_CASE("velocity field is linear in x") {
  GasParameters p = derive_constants(3.0, 2.0);
  CHECK(barenblatt_velocity(p, 0.0, 5.0) == 0.0);
  CHECK(barenblatt_velocity(p, 1.0, 5.0) ==
        doctest::Approx(1.0 / (4.0 * 6.0)).epsilon(1e-15));
  CHECK(barenblatt_velocity(p, -2.0, 0.0) ==
        doctest::Approx(-2.0 / 4.0).epsilon(1e-15));
}

TEST_CASE("Darcy balance of the reference fields") {
  // d/dx (rho^gamma) + rho u = 0 at interior points, via centered
  // differences; error is O(h^2).
  for (double gamma : {1.5, 2.0, 3.0}) {
    CAPTURE(gamma);
    GasParameters p = derive_constants(gamma, 1.0);
    for (double t : {0.0, 4.0}) {
      double hi = barenblatt_boundaries(p, t).second;
      for (double frac : {0.1, 0.45, 0.8}) {
        double x = frac * hi;
        double h = 1e-5 * hi;
        double dpdx = (std::pow(barenblatt_density(p, x + h, t), gamma) -
                       std::pow(barenblatt_density(p, x - h, t), gamma)) /
                      (2.0 * h);
        double ru = barenblatt_density(p, x, t) * barenblatt_velocity(p, x, t);
        CHECK(std::abs(dpdx + ru) <= 1e-7 * (std::abs(ru) + 1e-3));
      }
    }
  }
}

TEST_CASE("degenerate weight evaluations") {
  GasParameters p = derive_constants(2.0, 1.0);
  CHECK(varsigma(p, 0.0) == doctest::Approx(p.A).epsilon(1e-15));
  CHECK(varsigma(p, p.half_width) == doctest::Approx(0.0).scale(1e-14));
  CHECK(varsigma(p, 2.0 * p.half_width) == 0.0);  // clamped
  auto [rho0, vs] = initial_weight(p, 0.5);
  CHECK(vs == doctest::Approx(p.A - p.B * 0.25).epsilon(1e-15));
  CHECK(rho0 == doctest::Approx(std::pow(vs, p.alpha)).epsilon(1e-15));
  CHECK_THROWS_AS(initial_weight(p, p.half_width * 1.01), DomainError);
}
