#include "ansatz.hpp"

#include <cmath>
#include <string>

#include "errors.hpp"
#include "quadrature.hpp"

namespace vfb {

namespace {

std::vector<double> log_spaced(double t_end, int n) {
  // t_k = (1+t_end)^{k/(n-1)} - 1, so t_0 = 0 and t_{n-1} = t_end.
  std::vector<double> ts(n);
  double le = std::log1p(t_end);
  for (int k = 0; k < n; ++k) {
    ts[k] = std::expm1(le * double(k) / double(n - 1));
  }
  ts.back() = t_end;
  return ts;
}

template <class F>
double bisect(F&& f, double lo, double hi) {
  double flo = f(lo);
  for (int it = 0; it < 200 && hi - lo > 1e-13 * (1.0 + std::abs(hi)); ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = f(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace

AnsatzTable::AnsatzTable(const GasParameters& p, double t_end, double rel_tol)
    : p_(p), t_end_(t_end), rel_tol_(rel_tol) {
  if (!(t_end > 0.0)) {
    throw DomainError("ansatz horizon must be positive, got " + std::to_string(t_end));
  }
  if (!(rel_tol >= 1e-13 && rel_tol <= 1e-6)) {
    throw DomainError("ansatz rel_tol must lie in [1e-13, 1e-6], got " +
                      std::to_string(rel_tol));
  }
  double gamma = p_.gamma;
  Rhs2 rhs = [gamma](double /*t*/, const State2& y, State2& dy) {
    if (!(y[0] > 0.0)) {
      throw StateError("stretch became nonpositive during integration");
    }
    dy[0] = y[1];
    dy[1] = std::pow(y[0], -gamma) / (gamma + 1.0) - y[1];
  };
  Dopri5Options opt;
  opt.rel_tol = rel_tol;
  opt.abs_tol = rel_tol * 1e-2;
  opt.on_accept = [this](double t, const State2& y) {
    if (!(y[0] > 0.0)) {
      throw StateError("stretch became nonpositive at t = " + std::to_string(t));
    }
  };
  State2 y0{1.0, 1.0 / (gamma + 1.0)};
  traj_ = integrate_dopri5(rhs, y0, 0.0, t_end, opt);
}

State2 AnsatzTable::state(double t) const { return traj_.eval(t); }

double AnsatzTable::eta_x(double t) const { return state(t)[0]; }
double AnsatzTable::eta_xt(double t) const { return state(t)[1]; }

double AnsatzTable::eta_xtt(double t) const {
  State2 y = state(t);
  return std::pow(y[0], -p_.gamma) / (p_.gamma + 1.0) - y[1];
}

double AnsatzTable::eta_xttt(double t) const {
  State2 y = state(t);
  double gp1 = p_.gamma + 1.0;
  double ytt = std::pow(y[0], -p_.gamma) / gp1 - y[1];
  return -p_.gamma * std::pow(y[0], -p_.gamma - 1.0) * y[1] / gp1 - ytt;
}

double AnsatzTable::background(double t) const {
  return std::pow(1.0 + t, 1.0 / (p_.gamma + 1.0));
}

double AnsatzTable::background_t(double t) const {
  double gp1 = p_.gamma + 1.0;
  return std::pow(1.0 + t, 1.0 / gp1 - 1.0) / gp1;
}

double AnsatzTable::background_tt(double t) const {
  double gp1 = p_.gamma + 1.0;
  return (1.0 / gp1) * (1.0 / gp1 - 1.0) * std::pow(1.0 + t, 1.0 / gp1 - 2.0);
}

std::pair<double, double> AnsatzTable::correction_h(double t) const {
  if (t < 0.0 || t > t_end_ * (1.0 + 1e-12)) {
    throw DomainError("correction time " + std::to_string(t) +
                      " outside [0, " + std::to_string(t_end_) + "]");
  }
  State2 y = state(std::min(t, t_end_));
  return {y[0] - background(t), y[1] - background_t(t)};
}

double AnsatzTable::duhamel_residual() const {
  double gamma = p_.gamma;
  double gp1 = gamma + 1.0;
  double worst = 0.0;
  auto checkpoints = log_spaced(t_end_, 50);
  for (double t : checkpoints) {
    if (t == 0.0) continue;
    // Contributions with t - s > 45 are below e^-45 and cannot affect the
    // residual at the tolerances in play.
    double s_lo = std::max(0.0, t - 45.0);
    double integral = integrate(
        [&](double s) { return std::exp(s - t) * std::pow(eta_x(s), -gamma); },
        s_lo, t, 1e-10);
    double rhs = (std::exp(-t) + integral) / gp1;
    double lhs = eta_xt(t);
    worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
  }
  return worst;
}

PhaseSummary AnsatzTable::phase_portrait() const {
  auto z = [this](double t) { return correction_h(t).second; };
  auto zdot = [this](double t) { return eta_xtt(t) - background_tt(t); };

  auto scan = log_spaced(t_end_, 4096);
  auto find_crossing = [&](auto&& f, double from, bool downward) -> double {
    double prev_t = from;
    double prev_f = f(from);
    for (double t : scan) {
      if (t <= from) continue;
      double ft = f(t);
      bool crossed = downward ? (prev_f > 0.0 && ft <= 0.0)
                              : (prev_f < 0.0 && ft >= 0.0);
      if (crossed) return bisect(f, prev_t, t);
      prev_t = t;
      prev_f = ft;
    }
    return -1.0;
  };

  // h_t rises to its maximum (h_tt crosses zero downward), h peaks where
  // h_t crosses zero, and h_t bottoms out where h_tt crosses zero upward.
  double t0 = find_crossing(zdot, 0.0, /*downward=*/true);
  if (t0 < 0.0) throw HorizonError("h_t never peaked before t_end");
  double t1 = find_crossing(z, t0, /*downward=*/true);
  if (t1 < 0.0) throw HorizonError("h never peaked before t_end");
  double t2 = find_crossing(zdot, t1, /*downward=*/false);
  if (t2 < 0.0) throw HorizonError("h_t never bottomed out before t_end");
  if (std::abs(z(t_end_)) > 1e-10) {
    throw HorizonError("h_t has not relaxed to 0 within 1e-10 by t_end = " +
                       std::to_string(t_end_) + "; extend the horizon");
  }
  PhaseSummary s;
  s.t0 = t0;
  s.t1 = t1;
  s.t2 = t2;
  s.terminal_h = h(t_end_);
  return s;
}

DecayReport AnsatzTable::decay_envelope_check(int k_max) const {
  if (k_max < 0 || k_max > 3) {
    throw DomainError("derivative order must be <= 3, got " + std::to_string(k_max));
  }
  double gp1 = p_.gamma + 1.0;
  DecayReport rep;
  rep.weighted_sup.assign(std::size_t(k_max) + 1, 0.0);

  // Checkpoints: every accepted step plus a log-spaced fill-in.
  std::vector<double> ts = sample_times();
  auto fill = log_spaced(t_end_, 800);
  ts.insert(ts.end(), fill.begin(), fill.end());

  for (double t : ts) {
    double tau = 1.0 + t;
    double derivs[4] = {eta_x(t), eta_xt(t), eta_xtt(t), eta_xttt(t)};
    for (int k = 0; k <= k_max; ++k) {
      double weighted = std::abs(derivs[k]) * std::pow(tau, k - 1.0 / gp1);
      rep.weighted_sup[k] = std::max(rep.weighted_sup[k], weighted);
    }
    if (t >= 1.0) {
      auto [hv, htv] = correction_h(t);
      double env = std::pow(tau, -p_.gamma / gp1) * std::log(tau);
      double env_t = std::pow(tau, -1.0 - p_.gamma / gp1) * std::log(tau);
      rep.h_envelope_sup = std::max(rep.h_envelope_sup, hv / env);
      rep.ht_envelope_sup = std::max(rep.ht_envelope_sup, std::abs(htv) / env_t);
    }
  }
  rep.K_observed = rep.weighted_sup[0];
  return rep;
}

}  // namespace vfb
