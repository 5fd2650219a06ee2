#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tumorstab/errors.hpp"
#include "tumorstab/kernels/tolerance.hpp"

namespace tumorstab {

/// Accepted steps of an initial-value solve, with cubic Hermite dense output.
template <typename State>
struct Trajectory {
  std::vector<double> r;
  std::vector<State> y;
  std::vector<State> dy;

  [[nodiscard]] const State& final_state() const { return y.back(); }
  [[nodiscard]] double final_radius() const { return r.back(); }
  [[nodiscard]] std::size_t steps() const { return r.empty() ? 0 : r.size() - 1; }

  [[nodiscard]] State at(double t) const {
    if (t <= r.front()) return y.front();
    if (t >= r.back()) return y.back();
    const auto it = std::upper_bound(r.begin(), r.end(), t);
    const auto i = static_cast<std::size_t>(it - r.begin()) - 1;
    const double h = r[i + 1] - r[i];
    const double s = (t - r[i]) / h;
    const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
    const double h10 = s * (1.0 - s) * (1.0 - s);
    const double h01 = s * s * (3.0 - 2.0 * s);
    const double h11 = s * s * (s - 1.0);
    return (h00 * y[i] + h10 * h * dy[i] + h01 * y[i + 1] + h11 * h * dy[i + 1]).eval();
  }
};

struct IvpOptions {
  std::size_t max_steps = 2'000'000;
  double initial_step = 0.0;  // 0 selects automatically
  double max_step = std::numeric_limits<double>::infinity();
};

namespace detail {

template <typename State>
bool all_finite(const State& s) {
  return s.allFinite();
}

template <typename State>
double error_norm(const State& err, const State& y0, const State& y1, const Tolerance& tol) {
  const auto scale = (tol.abs + tol.rel * y0.cwiseAbs().cwiseMax(y1.cwiseAbs()).array()).eval();
  return (err.cwiseAbs().array() / scale).maxCoeff();
}

}  // namespace detail

/// Adaptive Dormand–Prince 5(4) integration of y' = rhs(r, y) from r0 to r1.
///
/// Every entry of `breakpoints` inside (r0, r1) is hit exactly and recorded as
/// an accepted step, which lets callers tabulate the solution on a grid at
/// full integrator accuracy. `rhs(r, y)` must return a State.
template <typename State, typename Rhs>
Trajectory<State> integrate_ivp(Rhs&& rhs, double r0, double r1, const State& y0, const Tolerance& tol,
                                std::span<const double> breakpoints = {}, const IvpOptions& options = {}) {
  tol.validate();
  if (!(r0 < r1)) {
    throw DomainError("integrate_ivp: need r0 < r1 (got " + std::to_string(r0) + ", " + std::to_string(r1) + ")");
  }
  if (!detail::all_finite(y0)) throw DomainError("integrate_ivp: non-finite initial state");

  // Dormand–Prince tableau.
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

  std::vector<double> stops;
  stops.reserve(breakpoints.size() + 1);
  for (double b : breakpoints) {
    if (b > r0 && b < r1) stops.push_back(b);
  }
  std::sort(stops.begin(), stops.end());
  stops.erase(std::unique(stops.begin(), stops.end()), stops.end());
  stops.push_back(r1);

  Trajectory<State> traj;
  State y = y0;
  State k1 = rhs(r0, y);
  if (!detail::all_finite(k1)) throw DomainError("integrate_ivp: non-finite right-hand side at r=" + std::to_string(r0));
  traj.r.push_back(r0);
  traj.y.push_back(y);
  traj.dy.push_back(k1);

  double r = r0;
  double h = options.initial_step;
  if (!(h > 0.0)) {
    const double ynorm = y.cwiseAbs().maxCoeff() + tol.abs;
    const double fnorm = k1.cwiseAbs().maxCoeff() + tol.abs;
    h = 0.01 * ynorm / fnorm;
    h = std::clamp(h, 1e-6 * (r1 - r0), 0.1 * (r1 - r0));
  }
  h = std::min(h, options.max_step);

  std::size_t next_stop = 0;
  std::size_t accepted = 0;
  bool last_nonfinite = false;
  while (next_stop < stops.size()) {
    const double target = stops[next_stop];
    const double min_step = 64.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(r));
    if (h < min_step) {
      if (last_nonfinite) {
        throw DomainError("integrate_ivp: non-finite right-hand side near r=" + std::to_string(r));
      }
      throw StepSizeError("integrate_ivp: step size underflow at r=" + std::to_string(r) +
                          " (stiff or singular problem)");
    }
    if (++accepted > options.max_steps) {
      throw StepSizeError("integrate_ivp: exceeded maximum step count at r=" + std::to_string(r));
    }
    const bool lands = r + h >= target - 1e-14 * std::max(1.0, std::abs(target));
    const double step = lands ? target - r : h;

    const State k2 = rhs(r + c2 * step, (y + step * (a21 * k1)).eval());
    const State k3 = rhs(r + c3 * step, (y + step * (a31 * k1 + a32 * k2)).eval());
    const State k4 = rhs(r + c4 * step, (y + step * (a41 * k1 + a42 * k2 + a43 * k3)).eval());
    const State k5 = rhs(r + c5 * step, (y + step * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4)).eval());
    const State k6 = rhs(r + step, (y + step * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5)).eval());
    const State y_new = (y + step * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6)).eval();
    const double r_new = lands ? target : r + step;
    const State k7 = rhs(r_new, y_new);
    const State err = (step * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7)).eval();

    const bool finite = detail::all_finite(y_new) && detail::all_finite(k7) && detail::all_finite(err);
    const double en = finite ? detail::error_norm(err, y, y_new, tol) : std::numeric_limits<double>::infinity();
    last_nonfinite = !finite;

    if (en <= 1.0) {
      r = r_new;
      y = y_new;
      k1 = k7;
      traj.r.push_back(r);
      traj.y.push_back(y);
      traj.dy.push_back(k1);
      if (lands) ++next_stop;
      const double factor = en == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(en, -0.2), 0.2, 5.0);
      // A step shortened to hit a breakpoint says nothing about the admissible size.
      h = std::min(options.max_step, lands ? std::max(h, step * factor) : step * factor);
    } else {
      const double factor = std::isfinite(en) ? std::clamp(0.9 * std::pow(en, -0.2), 0.1, 0.9) : 0.1;
      h = step * factor;
    }
  }
  return traj;
}

}  // namespace tumorstab
