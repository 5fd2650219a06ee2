#include "tumorstab/kernels/bessel.hpp"

#include <cmath>
#include <string>

#include "tumorstab/errors.hpp"

namespace tumorstab {

namespace {

double series(int l, double x) {
  // x^l / (2l+1)!! * sum_k (x^2/2)^k / (k! (2l+3)(2l+5)...(2l+2k+1))
  double lead = 1.0;
  for (int j = 1; j <= l; ++j) lead *= x / (2.0 * j + 1.0);
  const double half_x2 = 0.5 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 500; ++k) {
    term *= half_x2 / (static_cast<double>(k) * (2.0 * l + 2.0 * k + 1.0));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return lead * sum;
}

}  // namespace

double bessel_i_spherical(int l, double x) {
  if (l < 0) throw DomainError("bessel_i_spherical: negative order " + std::to_string(l));
  if (!(x >= 0.0) || !std::isfinite(x)) throw DomainError("bessel_i_spherical: argument must be finite and >= 0");
  if (x == 0.0) return l == 0 ? 1.0 : 0.0;
  if (x < 0.5 * (l + 1)) return series(l, x);

  const double i0 = std::sinh(x) / x;
  if (!std::isfinite(i0)) throw RangeError("bessel_i_spherical: overflow for x=" + std::to_string(x));
  if (l == 0) return i0;

  // Backward recurrence i_{n-1} = i_{n+1} + (2n+1)/x i_n from well above max(l, x).
  const int start = l + static_cast<int>(x) + 60;
  double upper = 0.0;
  double current = 1e-280;
  double at_l = 0.0;
  for (int n = start; n >= 1; --n) {
    const double lower = upper + (2.0 * n + 1.0) / x * current;
    upper = current;
    current = lower;
    if (n - 1 == l) at_l = current;
    if (std::abs(current) > 1e250) {
      current *= 1e-250;
      upper *= 1e-250;
      at_l *= 1e-250;
    }
  }
  return at_l * (i0 / current);
}

}  // namespace tumorstab
