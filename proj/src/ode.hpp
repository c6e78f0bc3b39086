#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "errors.hpp"

namespace vfb {

// Dormand-Prince 5(4) with the classical order-4 continuous extension.
// Only the two-component variant is needed here.
using State2 = std::array<double, 2>;

struct DenseStep {
  double t0 = 0.0;
  double h = 0.0;
  // Interpolation coefficients: y(t0 + s*h) =
  //   c1 + s*(c2 + (1-s)*(c3 + s*(c4 + (1-s)*c5)))
  std::array<State2, 5> c{};
};

class DenseTrajectory {
 public:
  double t_begin() const { return t_begin_; }
  double t_end() const { return t_end_; }
  std::size_t step_count() const { return steps_.size(); }

  // Accepted step endpoints, strictly increasing, starting at t_begin.
  const std::vector<double>& times() const { return times_; }

  State2 eval(double t) const;

  void append(const DenseStep& step);
  void set_begin(double t, const State2& y0) {
    t_begin_ = t_end_ = t;
    y_begin_ = y0;
    times_.assign(1, t);
  }

 private:
  double t_begin_ = 0.0;
  double t_end_ = 0.0;
  State2 y_begin_{};
  std::vector<DenseStep> steps_;
  std::vector<double> times_;  // times_[i] = start of steps_[i]; back() = t_end
};

struct Dopri5Options {
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  double initial_step = 1e-3;
  std::size_t max_steps = 50'000'000;
  // Called after each accepted step with (t, y); may throw to abort.
  std::function<void(double, const State2&)> on_accept;
};

using Rhs2 = std::function<void(double, const State2&, State2&)>;

DenseTrajectory integrate_dopri5(const Rhs2& rhs, const State2& y0, double t0,
                                 double t1, const Dopri5Options& opt);

}  // namespace vfb
