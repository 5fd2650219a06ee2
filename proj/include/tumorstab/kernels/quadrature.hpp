#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "tumorstab/errors.hpp"
#include "tumorstab/kernels/tolerance.hpp"

namespace tumorstab {

struct QuadOptions {
  int max_intervals = 4000;
};

namespace detail {

struct GkSegment {
  double a = 0.0;
  double b = 0.0;
  double value = 0.0;
  double error = 0.0;
  bool operator<(const GkSegment& other) const { return error < other.error; }
};

// 15-point Kronrod rule with its embedded 7-point Gauss rule.
template <typename F>
GkSegment gauss_kronrod15(F& f, double a, double b) {
  static constexpr std::array<double, 8> xk = {
      0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
      0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
      0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
      0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
  static constexpr std::array<double, 8> wk = {
      0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
      0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
      0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
      0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
  static constexpr std::array<double, 4> wg = {
      0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
      0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  if (!std::isfinite(fc)) throw DomainError("quad: non-finite integrand at x=" + std::to_string(center));
  double kronrod = wk[7] * fc;
  double gauss = wg[3] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * xk[static_cast<std::size_t>(j)];
    const double f1 = f(center - dx);
    const double f2 = f(center + dx);
    if (!std::isfinite(f1) || !std::isfinite(f2)) {
      throw DomainError("quad: non-finite integrand near x=" + std::to_string(center));
    }
    kronrod += wk[static_cast<std::size_t>(j)] * (f1 + f2);
    if (j % 2 == 1) gauss += wg[static_cast<std::size_t>(j / 2)] * (f1 + f2);
  }
  GkSegment seg{a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
  return seg;
}

}  // namespace detail

/// Globally adaptive Gauss–Kronrod (7/15) quadrature of f over [a, b].
///
/// Stops when the summed error estimate falls below tol.bound(|result|).
template <typename F>
double quad(F&& f, double a, double b, const Tolerance& tol = {}, const QuadOptions& options = {}) {
  tol.validate();
  if (!(a <= b)) throw DomainError("quad: need a <= b");
  if (a == b) return 0.0;

  std::priority_queue<detail::GkSegment> heap;
  auto first = detail::gauss_kronrod15(f, a, b);
  double total = first.value;
  double total_error = first.error;
  heap.push(first);
  std::vector<detail::GkSegment> frozen;  // too narrow to split further

  int intervals = 1;
  while (total_error > tol.bound(total) && !heap.empty()) {
    if (intervals >= options.max_intervals) {
      throw ConvergenceError("quad: tolerance not reached after " + std::to_string(intervals) +
                             " subintervals (error estimate " + std::to_string(total_error) + ")");
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        (worst.b - worst.a) < 64.0 * std::numeric_limits<double>::epsilon() * std::abs(mid)) {
      frozen.push_back(worst);
      continue;
    }
    const auto left = detail::gauss_kronrod15(f, worst.a, mid);
    const auto right = detail::gauss_kronrod15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }

  // Re-sum from the pieces to shed the running-update rounding.
  double sum = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    heap.pop();
  }
  for (const auto& s : frozen) sum += s.value;
  return sum;
}

}  // namespace tumorstab
