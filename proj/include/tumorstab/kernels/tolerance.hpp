#pragma once

#include <cmath>
#include <string>

#include "tumorstab/errors.hpp"

namespace tumorstab {

/// Mixed relative/absolute error target shared by all numerical kernels.
struct Tolerance {
  double rel = 1e-10;
  double abs = 1e-12;

  void validate() const {
    if (!(rel > 0.0) || !(abs > 0.0) || !std::isfinite(rel) || !std::isfinite(abs)) {
      throw ValidationError("tolerance must be positive and finite (rel=" + std::to_string(rel) +
                            ", abs=" + std::to_string(abs) + ")");
    }
  }

  [[nodiscard]] double bound(double magnitude) const { return abs + rel * std::abs(magnitude); }
};

}  // namespace tumorstab
