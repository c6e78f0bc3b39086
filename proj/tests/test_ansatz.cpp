#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ansatz.hpp"
#include "diagnostics.hpp"
#include "errors.hpp"
#include "gas.hpp"

using namespace vfb;

namespace {

std::vector<double> log_times(double t_end, int n) {
  std::vector<double> ts(n);
  for (int k = 0; k < n; ++k) {
    ts[k] = std::expm1(std::log1p(t_end) * double(k) / double(n - 1));
  }
  return ts;
}

}  // namespace

TEST_CASE("initial conditions and the vanishing initial acceleration") {
  for (double gamma : {1.5, 2.0, 3.0}) {
    CAPTURE(gamma);
    GasParameters p = derive_constants(gamma, 1.0);
    AnsatzTable table(p, 10.0, 1e-11);
    CHECK(table.eta_x(0.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(table.eta_xt(0.0) == doctest::Approx(1.0 / (gamma + 1.0)).epsilon(1e-13));
    CHECK(table.eta_xtt(0.0) == doctest::Approx(0.0).scale(1e-13));
    auto [h0, ht0] = table.correction_h(0.0);
    CHECK(h0 == doctest::Approx(0.0).scale(1e-13));
    CHECK(ht0 == doctest::Approx(0.0).scale(1e-13));
  }
}

TEST_CASE("construction rejects bad arguments") {
  GasParameters p = derive_constants(2.0, 1.0);
  CHECK_THROWS_AS(AnsatzTable(p, -1.0, 1e-10), DomainError);
  CHECK_THROWS_AS(AnsatzTable(p, 0.0, 1e-10), DomainError);
  CHECK_THROWS_AS(AnsatzTable(p, 10.0, 1e-5), DomainError);
  CHECK_THROWS_AS(AnsatzTable(p, 10.0, 1e-14), DomainError);
  AnsatzTable table(p, 10.0, 1e-10);
  CHECK_THROWS_AS(table.correction_h(-0.1), DomainError);
  CHECK_THROWS_AS(table.correction_h(11.0), DomainError);
}

TEST_CASE("sign and envelope invariants over a long horizon") {
  for (double gamma : {1.5, 2.0, 3.0}) {
    CAPTURE(gamma);
    GasParameters p = derive_constants(gamma, 1.0);
    AnsatzTable table(p, 1e4, 1e-10);
    double gp1 = gamma + 1.0;
    for (double t : log_times(1e4, 400)) {
      double bg = std::pow(1.0 + t, 1.0 / gp1);
      CHECK(table.eta_xt(t) >= -1e-12);
      CHECK(table.eta_x(t) >= bg * (1.0 - 1e-9));
      CHECK(table.eta_x(t) <= 2.0 * bg);
      CHECK(table.h(t) >= -1e-12);
    }
    DecayReport rep = table.decay_envelope_check(3);
    CHECK(rep.K_observed >= 1.0);
    CHECK(rep.K_observed <= 2.0);
    CHECK(rep.h_envelope_sup <= 1.0 + 1e-6);
    CHECK(rep.ht_envelope_sup > 0.0);
    CHECK(rep.ht_envelope_sup < 10.0);
    for (double s : rep.weighted_sup) {
      CHECK(std::isfinite(s));
      CHECK(s < 10.0);
    }
  }
}

TEST_CASE("correction stays below its envelope at t = 1e4") {
  GasParameters p = derive_constants(2.0, 1.0);
  AnsatzTable table(p, 1e4, 1e-10);
  double t = 1e4;
  double envelope = std::pow(1.0 + t, -2.0 / 3.0) * std::log(1.0 + t);
  CHECK(envelope == doctest::Approx(0.0198).epsilon(2e-2));
  CHECK(table.h(t) >= 0.0);
  CHECK(table.h(t) <= envelope);
}

TEST_CASE("integral-representation oracle agrees with the ODE trajectory") {
  GasParameters p = derive_constants(2.0, 1.0);
  AnsatzTable table(p, 1e3, 1e-10);
  double residual = table.duhamel_residual();
  CHECK(residual >= 0.0);
  CHECK(residual <= 1e-6);
}

TEST_CASE("phase landmarks of the correction orbit") {
  GasParameters p = derive_constants(2.0, 1.0);
  AnsatzTable table(p, 2e7, 1e-9);
  PhaseSummary s = table.phase_portrait();
  CHECK(s.t0 > 0.0);
  CHECK(s.t1 > s.t0);
  CHECK(s.t2 > s.t1);
  CHECK(std::abs(table.h_t(s.t1)) <= 1e-10);  // h peaks where h_t crosses 0
  CHECK(table.h_t(0.5 * (s.t0 + s.t1)) > 0.0);
  CHECK(table.h_t(0.5 * (s.t1 + s.t2)) < 0.0);
  CHECK(table.h(s.t1) >= table.h(s.t2));  // h decreasing on (t1, t2)
  double env = std::pow(1.0 + 2e7, -2.0 / 3.0) * std::log(1.0 + 2e7);
  CHECK(s.terminal_h >= 0.0);
  CHECK(s.terminal_h <= env);
}

TEST_CASE("phase portrait needs a long enough horizon") {
  GasParameters p = derive_constants(2.0, 1.0);
  AnsatzTable table(p, 100.0, 1e-10);
  CHECK_THROWS_AS(table.phase_portrait(), HorizonError);
}

TEST_CASE("refinement stability of the terminal stretch") {
  GasParameters p = derive_constants(2.0, 1.0);
  double coarse = AnsatzTable(p, 1e3, 1e-8).eta_x(1e3);
  double fine = AnsatzTable(p, 1e3, 5e-9).eta_x(1e3);
  CHECK(std::abs(coarse - fine) / std::abs(fine) <= 10.0 * 1e-8);
}

TEST_CASE("tail slope of the correction") {
  // The true tail carries a ln(1+t) factor, so the fitted pure-power slope
  // sits above -gamma/(gamma+1) by roughly 1/<ln t> over this window.
  for (double gamma : {1.5, 2.0, 3.0}) {
    CAPTURE(gamma);
    GasParameters p = derive_constants(gamma, 1.0);
    AnsatzTable table(p, 1e4, 1e-10);
    std::vector<double> ts, hs;
    for (double t : log_times(1e4, 300)) {
      if (t < 50.0) continue;
      ts.push_back(t);
      hs.push_back(table.h(t));
    }
    RateFit fit = fit_rate(ts, hs, 1e2, 1e4);
    CHECK(fit.exponent <= -gamma / (gamma + 1.0) + 0.15);
    CHECK(fit.exponent >= -1.0);
    CHECK(fit.r_squared > 0.99);
  }
}

TEST_CASE("third derivative is consistent with differencing the second") {
  GasParameters p = derive_constants(2.0, 1.0);
  AnsatzTable table(p, 100.0, 1e-11);
  for (double t : {1.0, 5.0, 40.0}) {
    double dt = 1e-4;
    double fd = (table.eta_xtt(t + dt) - table.eta_xtt(t - dt)) / (2.0 * dt);
    CHECK(table.eta_xttt(t) == doctest::Approx(fd).epsilon(1e-6));
  }
}
