#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>

#include "cqed/errors.hpp"

namespace cqed {

struct OdeOptions {
  double rtol = 1e-8;
  double atol = 1e-10;
  double initial_step = 0.0;  // 0 = automatic
  double min_step = 1e-14;    // relative to the integration time scale
  std::size_t max_steps = 50'000'000;
};

/// Embedded Dormand-Prince 5(4) stepper with FSAL reuse, for any Eigen
/// dense State (vector or matrix, real or complex).
template <typename State>
class DormandPrince {
 public:
  using Rhs = std::function<void(double t, const State& y, State& dydt)>;

  DormandPrince(Rhs rhs, OdeOptions options) : rhs_(std::move(rhs)), opt_(options) {}

  /// Forget the cached derivative; call after modifying y outside step().
  void reset() { have_k1_ = false; }

  [[nodiscard]] std::size_t accepted_steps() const { return accepted_; }
  [[nodiscard]] std::size_t rejected_steps() const { return rejected_; }

  /// Advance (t, y) by one accepted adaptive step without passing t_end.
  /// Returns the step length taken.
  double step(double& t, State& y, double t_end) {
    const double span = t_end - t;
    if (span <= 0.0) return 0.0;
    if (!have_k1_) {
      k1_.resizeLike(y);
      rhs_(t, y, k1_);
      have_k1_ = true;
    }
    if (h_ <= 0.0) h_ = initial_step(y, span);
    const double scale = std::max({std::abs(t), std::abs(t_end), span});
    for (;;) {
      double h = std::min(h_, span);
      // Avoid leaving a sliver shorter than the roundoff floor before t_end.
      if (span - h < 1e-12 * scale) h = span;
      stages(t, y, h, /*with_error=*/true);
      const double err = error_norm(y);
      if (!std::isfinite(err)) {
        h_ = 0.25 * h;
      } else if (err <= 1.0) {
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        t = (h == span) ? t_end : t + h;
        y.swap(y_new_);
        k1_.swap(k7_);
        ++accepted_;
        if (accepted_ > opt_.max_steps) throw NumericalError("integrator: step budget exhausted");
        // Do not let a short final step collapse the next proposal.
        if (h == span && h < h_) fac_hold_ = true;
        if (!fac_hold_) h_ = h * fac;
        fac_hold_ = false;
        return h;
      } else {
        h_ = h * std::clamp(0.9 * std::pow(err, -0.2), 0.2, 1.0);
        ++rejected_;
      }
      if (h_ < opt_.min_step * scale) throw NumericalError("integrator: step-size underflow");
    }
  }

  /// Integrate to t_end, invoking after_step(t, y) after every accepted step.
  template <typename AfterStep>
  void integrate(double& t, State& y, double t_end, AfterStep&& after_step) {
    while (t < t_end) {
      step(t, y, t_end);
      after_step(t, y);
    }
  }

  void integrate(double& t, State& y, double t_end) {
    integrate(t, y, t_end, [](double, const State&) {});
  }

  /// Fifth-order solution after one fixed step h from (t, y); does not
  /// touch the adaptive state or FSAL cache.
  State propagate(double t, const State& y, double h) {
    State k1(y.rows(), y.cols());
    rhs_(t, y, k1);
    State saved_k1;
    saved_k1.swap(k1_);
    k1_ = std::move(k1);
    stages(t, y, h, /*with_error=*/false);
    k1_.swap(saved_k1);
    return y_new_;
  }

 private:
  void stages(double t, const State& y, double h, bool with_error) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                     e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    tmp_ = y + h * a21 * k1_;
    rhs_(t + c2 * h, tmp_, k2_);
    tmp_ = y + h * (a31 * k1_ + a32 * k2_);
    rhs_(t + c3 * h, tmp_, k3_);
    tmp_ = y + h * (a41 * k1_ + a42 * k2_ + a43 * k3_);
    rhs_(t + c4 * h, tmp_, k4_);
    tmp_ = y + h * (a51 * k1_ + a52 * k2_ + a53 * k3_ + a54 * k4_);
    rhs_(t + c5 * h, tmp_, k5_);
    tmp_ = y + h * (a61 * k1_ + a62 * k2_ + a63 * k3_ + a64 * k4_ + a65 * k5_);
    rhs_(t + h, tmp_, k6_);
    y_new_ = y + h * (b1 * k1_ + b3 * k3_ + b4 * k4_ + b5 * k5_ + b6 * k6_);
    if (!with_error) return;
    rhs_(t + h, y_new_, k7_);
    err_ = h * (e1 * k1_ + e3 * k3_ + e4 * k4_ + e5 * k5_ + e6 * k6_ + e7 * k7_);
  }

  double error_norm(const State& y) const {
    const auto scale = opt_.atol + opt_.rtol * y.array().abs().max(y_new_.array().abs());
    return std::sqrt((err_.array().abs() / scale).square().mean());
  }

  double initial_step(const State& y, double span) const {
    if (opt_.initial_step > 0.0) return std::min(opt_.initial_step, span);
    const double d0 = std::sqrt((y.array().abs() / (opt_.atol + opt_.rtol * y.array().abs())).square().mean());
    const double d1 = std::sqrt((k1_.array().abs() / (opt_.atol + opt_.rtol * y.array().abs())).square().mean());
    double h = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 * span : 0.01 * d0 / d1;
    return std::min(h, span);
  }

  Rhs rhs_;
  OdeOptions opt_;
  double h_ = 0.0;
  bool have_k1_ = false;
  bool fac_hold_ = false;
  std::size_t accepted_ = 0;
  std::size_t rejected_ = 0;
  State k1_, k2_, k3_, k4_, k5_, k6_, k7_, tmp_, y_new_, err_;
};

}  // namespace cqed
