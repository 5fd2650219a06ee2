#pragma once

#include <cmath>

#include "tumorstab/model.hpp"
#include "tumorstab/radial_stationary.hpp"

namespace testsupport {

// sigma_c that puts the stationary radius at exactly 1 for f = lambda s, g = mu (s - sigma_c).
inline double unit_radius_sigma_c(double lambda) {
  const double k = std::sqrt(lambda);
  return 3.0 * (1.0 / (std::tanh(k) * k) - 1.0 / lambda);
}

inline tumorstab::ModelParams canonical_params(double lambda = 1.0, double mu = 1.0) {
  tumorstab::ModelParams p;
  p.lambda = lambda;
  p.mu = mu;
  p.sigma_c = unit_radius_sigma_c(lambda);
  p.sigma_bar = 1.0;
  p.nu = 1.0;
  p.gamma = 1.0;
  return p;
}

// Closed-form stationary nutrient on the unit ball: sinh(k r) / (r sinh k), k = sqrt(lambda).
inline double sigma_exact(double lambda, double r) {
  const double k = std::sqrt(lambda);
  if (r < 1e-4) return k / std::sinh(k) * (1.0 + lambda * r * r / 6.0 + lambda * lambda * r * r * r * r / 120.0);
  return std::sinh(k * r) / (r * std::sinh(k));
}

inline double sigma_prime_exact_at_1(double lambda) {
  const double k = std::sqrt(lambda);
  return k / std::tanh(k) - 1.0;
}

// Modified spherical Bessel i_l(x) by its power series, summed in long double.
inline double bessel_series_oracle(int l, double x) {
  long double lead = 1.0L;
  for (int k = 1; k <= l; ++k) lead *= static_cast<long double>(x) / (2 * k + 1);
  long double term = 1.0L;
  long double sum = 1.0L;
  const long double q = 0.5L * x * x;
  for (int k = 1; k < 200; ++k) {
    term *= q / (k * (2.0L * l + 2.0L * k + 1.0L));
    sum += term;
    if (term < 1e-30L * sum) break;
  }
  return static_cast<double>(lead * sum);
}

struct UnitCase {
  tumorstab::NormalizedModel model;
  tumorstab::UnitStationary unit;
};

inline UnitCase unit_case(double lambda = 1.0, double mu = 1.0) {
  UnitCase c;
  c.model = tumorstab::canonical_model(canonical_params(lambda, mu));
  const auto st = tumorstab::find_stationary(c.model.functions, c.model.gamma);
  c.unit = tumorstab::rescale_to_unit(st, c.model.functions);
  return c;
}

// Cached canonical lambda = 1 case shared by the tests of one binary.
inline const UnitCase& canonical_case() {
  static const UnitCase c = unit_case();
  return c;
}

}  // namespace testsupport
