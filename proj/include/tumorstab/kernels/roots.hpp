#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <string>
#include <utility>

#include "tumorstab/errors.hpp"
#include "tumorstab/kernels/tolerance.hpp"

namespace tumorstab {

/// Brent's method on a sign-changing bracket [lo, hi].
///
/// Returns x whose enclosing bracket is narrower than tol.bound(x).
template <std::floating_point T, typename F>
T find_root(F&& f, T lo, T hi, const Tolerance& tol, int max_iterations = 300) {
  tol.validate();
  T a = lo;
  T b = hi;
  T fa = f(a);
  T fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fb)) {
    throw DomainError("find_root: non-finite function value at bracket end");
  }
  if (fa == T(0)) return a;
  if (fb == T(0)) return b;
  if ((fa > 0) == (fb > 0)) {
    throw BracketError("find_root: no sign change on [" + std::to_string(lo) + ", " + std::to_string(hi) +
                       "] (f=" + std::to_string(fa) + ", " + std::to_string(fb) + ")");
  }

  T c = a;
  T fc = fa;
  T d = b - a;
  T e = d;
  const T eps = std::numeric_limits<T>::epsilon();
  for (int iter = 0; iter < max_iterations; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const T tol1 = T(2) * eps * std::abs(b) + T(0.5) * static_cast<T>(tol.bound(static_cast<double>(b)));
    const T m = T(0.5) * (c - b);
    if (std::abs(m) <= tol1 || fb == T(0)) return b;

    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      T p;
      T q;
      const T s = fb / fa;
      if (a == c) {
        p = T(2) * m * s;
        q = T(1) - s;
      } else {
        const T qa = fa / fc;
        const T r = fb / fc;
        p = s * (T(2) * m * qa * (qa - r) - (b - a) * (r - T(1)));
        q = (qa - T(1)) * (r - T(1)) * (s - T(1));
      }
      if (p > 0) {
        q = -q;
      } else {
        p = -p;
      }
      if (T(2) * p < std::min(T(3) * m * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = d;
      }
    } else {
      d = m;
      e = d;
    }
    a = b;
    fa = fb;
    b += std::abs(d) > tol1 ? d : (m > 0 ? tol1 : -tol1);
    fb = f(b);
    if (!std::isfinite(fb)) throw DomainError("find_root: non-finite function value at x=" + std::to_string(b));
  }
  throw ConvergenceError("find_root: no convergence after " + std::to_string(max_iterations) + " iterations");
}

}  // namespace tumorstab
