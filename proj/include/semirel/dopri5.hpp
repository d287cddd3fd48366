#ifndef SEMIREL_DOPRI5_HPP
#define SEMIREL_DOPRI5_HPP

// Adaptive Dormand-Prince 5(4) stepper with FSAL and step rejection.
// The right-hand side may refuse an evaluation (returns false), in which case
// the step is rejected and retried with a quarter of the step size.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>

namespace semirel {

enum class StepStatus { ok, refused, underflow };

struct Dopri5Options {
  double tol = 1e-10;        // mixed absolute/relative local error bound
  double h_min = 1e-14;      // step underflow threshold
  double h_max = 0.0;        // 0: unbounded
  long max_steps = 50'000'000;
};

struct Dopri5Stats {
  long accepted = 0;
  long rejected = 0;
  double max_error_ratio = 0.0;  // max accepted err/tol
};

template <std::size_t N>
class Dopri5 {
 public:
  using State = std::array<double, N>;

  explicit Dopri5(Dopri5Options opt) : opt_(opt) {}

  // Advances (t, y) to exactly t_target. `on_step` is called after every
  // accepted step with (t, y). Returns ok, refused (rhs refused at the
  // minimum step) or underflow (error control demanded a step below h_min).
  template <class Rhs, class OnStep>
  StepStatus advance(Rhs&& rhs, double& t, State& y, double t_target, double& h, OnStep&& on_step) {
    if (!have_k1_ || t != t_k1_) {
      if (!rhs(t, y, k1_)) return StepStatus::refused;
      have_k1_ = true;
      t_k1_ = t;
    }
    if (h <= 0.0) h = initial_step(rhs, t, y, t_target);
    while (t < t_target) {
      if (stats_.accepted >= opt_.max_steps) return StepStatus::underflow;
      double step = std::min(h, t_target - t);
      if (opt_.h_max > 0.0) step = std::min(step, opt_.h_max);
      const bool last = step >= t_target - t;
      State y_new;
      double err = 0.0;
      if (!try_step(rhs, t, y, step, y_new, err)) {
        h = 0.25 * step;
        ++stats_.rejected;
        if (h < opt_.h_min) return StepStatus::refused;
        continue;
      }
      if (err <= 1.0) {
        t = last ? t_target : t + step;
        y = y_new;
        k1_ = k7_;
        t_k1_ = t;
        ++stats_.accepted;
        stats_.max_error_ratio = std::max(stats_.max_error_ratio, err);
        on_step(t, y);
        const double fac = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
        // Do not let a short final step shrink the next interval's guess.
        h = last ? std::max(h, step * fac) : step * fac;
      } else {
        ++stats_.rejected;
        h = step * std::clamp(0.9 * std::pow(err, -0.2), 0.1, 1.0);
        if (h < opt_.h_min) return StepStatus::underflow;
      }
    }
    return StepStatus::ok;
  }

  const Dopri5Stats& stats() const { return stats_; }

 private:
  template <class Rhs>
  double initial_step(Rhs& rhs, double t, const State& y, double t_target) {
    double d0 = 0.0, d1 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt_.tol * (1.0 + std::fabs(y[i]));
      d0 = std::max(d0, std::fabs(y[i]) / sc);
      d1 = std::max(d1, std::fabs(k1_[i]) / sc);
    }
    double h0 = (d0 < 1e-5 || d1 < 1e-5) ? 1e-6 : 0.01 * d0 / d1;
    h0 = std::min(h0, t_target - t);
    State y1, f1;
    for (std::size_t i = 0; i < N; ++i) y1[i] = y[i] + h0 * k1_[i];
    if (!rhs(t + h0, y1, f1)) return std::max(opt_.h_min, 1e-3 * h0);
    double d2 = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double sc = opt_.tol * (1.0 + std::fabs(y[i]));
      d2 = std::max(d2, std::fabs(f1[i] - k1_[i]) / sc);
    }
    d2 /= h0;
    const double h1 = std::max(d1, d2) <= 1e-15 ? std::max(1e-6, h0 * 1e-3) : std::pow(0.01 / std::max(d1, d2), 0.2);
    return std::max(opt_.h_min, std::min({100.0 * h0, h1, t_target - t}));
  }

  template <class Rhs>
  bool try_step(Rhs& rhs, double t, const State& y, double h, State& y_new, double& err) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    State tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * a21 * k1_[i];
    if (!rhs(t + c2 * h, tmp, k2_)) return false;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a31 * k1_[i] + a32 * k2_[i]);
    if (!rhs(t + c3 * h, tmp, k3_)) return false;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * (a41 * k1_[i] + a42 * k2_[i] + a43 * k3_[i]);
    if (!rhs(t + c4 * h, tmp, k4_)) return false;
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a51 * k1_[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    if (!rhs(t + c5 * h, tmp, k5_)) return false;
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (a61 * k1_[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    if (!rhs(t + h, tmp, k6_)) return false;
    for (std::size_t i = 0; i < N; ++i)
      y_new[i] = y[i] + h * (b1 * k1_[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
    if (!rhs(t + h, y_new, k7_)) return false;
    err = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
      const double e = h * (e1 * k1_[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] + e7 * k7_[i]);
      const double sc = opt_.tol * (1.0 + std::max(std::fabs(y[i]), std::fabs(y_new[i])));
      err = std::max(err, std::fabs(e) / sc);
    }
    if (!std::isfinite(err)) err = 1e10;
    return true;
  }

  Dopri5Options opt_;
  Dopri5Stats stats_;
  State k1_{}, k2_{}, k3_{}, k4_{}, k5_{}, k6_{}, k7_{};
  bool have_k1_ = false;
  double t_k1_ = 0.0;
};

}  // namespace semirel

#endif  // SEMIREL_DOPRI5_HPP
