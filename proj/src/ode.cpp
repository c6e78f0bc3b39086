#include "ode.hpp"

namespace vfb {

namespace {

// Dormand-Prince coefficients.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
constexpr double c2 = 1.0 / 5.0, c3 = 3.0 / 10.0, c4 = 4.0 / 5.0,
                 c5 = 8.0 / 9.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// Continuous-extension weights.
constexpr double d1 = -12715105075.0 / 11282082432.0;
constexpr double d3 = 87487479700.0 / 32700410799.0;
constexpr double d4 = -10690763975.0 / 1880347072.0;
constexpr double d5 = 701980252875.0 / 199316789632.0;
constexpr double d6 = -1453857185.0 / 822651844.0;
constexpr double d7 = 69997945.0 / 29380423.0;

}  // namespace

void DenseTrajectory::append(const DenseStep& step) {
  steps_.push_back(step);
  t_end_ = step.t0 + step.h;
  times_.push_back(t_end_);
}

State2 DenseTrajectory::eval(double t) const {
  if (t < t_begin_ - 1e-12 * (1.0 + std::abs(t_begin_)) ||
      t > t_end_ + 1e-12 * (1.0 + std::abs(t_end_))) {
    throw DomainError("dense evaluation time " + std::to_string(t) +
                      " outside [" + std::to_string(t_begin_) + ", " +
                      std::to_string(t_end_) + "]");
  }
  if (steps_.empty()) return y_begin_;
  t = std::clamp(t, t_begin_, t_end_);
  // times_[i] is the start of steps_[i]; locate the covering step.
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t idx = (it == times_.begin()) ? 0 : (it - times_.begin() - 1);
  idx = std::min(idx, steps_.size() - 1);
  const DenseStep& st = steps_[idx];
  double s = (t - st.t0) / st.h;
  double s1 = 1.0 - s;
  State2 out;
  for (int i = 0; i < 2; ++i) {
    out[i] = st.c[0][i] +
             s * (st.c[1][i] + s1 * (st.c[2][i] + s * (st.c[3][i] + s1 * st.c[4][i])));
  }
  return out;
}

DenseTrajectory integrate_dopri5(const Rhs2& rhs, const State2& y0, double t0,
                                 double t1, const Dopri5Options& opt) {
  DenseTrajectory traj;
  traj.set_begin(t0, y0);
  if (t1 <= t0) return traj;

  double t = t0;
  State2 y = y0;
  State2 k1;
  rhs(t, y, k1);  // FSAL seed
  double h = std::min(opt.initial_step, t1 - t0);

  std::size_t n_steps = 0;
  while (t < t1) {
    if (++n_steps > opt.max_steps) {
      throw NumericalError("ODE step budget exhausted at t = " + std::to_string(t));
    }
    h = std::min(h, t1 - t);
    State2 k2, k3, k4, k5, k6, k7, ytmp, ynew;
    for (int i = 0; i < 2; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + c2 * h, ytmp, k2);
    for (int i = 0; i < 2; ++i) ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + c3 * h, ytmp, k3);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + c4 * h, ytmp, k4);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + c5 * h, ytmp, k5);
    for (int i = 0; i < 2; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (int i = 0; i < 2; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    rhs(t + h, ynew, k7);

    double err = 0.0;
    for (int i = 0; i < 2; ++i) {
      double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] +
                       e6 * k6[i] + e7 * k7[i]);
      double sc = opt.abs_tol +
                  opt.rel_tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      err += (ei / sc) * (ei / sc);
    }
    err = std::sqrt(err / 2.0);

    if (err <= 1.0) {
      DenseStep st;
      st.t0 = t;
      st.h = h;
      st.c[0] = y;
      for (int i = 0; i < 2; ++i) {
        double dy = ynew[i] - y[i];
        st.c[1][i] = dy;
        st.c[2][i] = h * k1[i] - dy;
        st.c[3][i] = dy - h * k7[i] - st.c[2][i];
        st.c[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] +
                          d6 * k6[i] + d7 * k7[i]);
      }
      traj.append(st);
      t += h;
      y = ynew;
      k1 = k7;
      if (opt.on_accept) opt.on_accept(t, y);
    }

    double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.2);
    h *= std::clamp(fac, 0.2, 5.0);
    if (h < 1e-14 * std::max(1.0, std::abs(t))) {
      throw NumericalError("ODE step size collapsed; last good time t = " +
                           std::to_string(t));
    }
  }
  return traj;
}

}  // namespace vfb
