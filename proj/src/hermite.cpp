#include "tumorstab/kernels/hermite.hpp"

#include <algorithm>

#include "tumorstab/errors.hpp"

namespace tumorstab {

HermiteTable::HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy)
    : x_(std::move(x)), y_(std::move(y)), dy_(std::move(dy)) {
  if (x_.size() < 2 || x_.size() != y_.size() || x_.size() != dy_.size()) {
    throw ValidationError("HermiteTable: need at least two knots with matching value/slope arrays");
  }
}

std::size_t HermiteTable::segment(double t) const {
  if (t <= x_.front()) return 0;
  if (t >= x_.back()) return x_.size() - 2;
  const auto it = std::upper_bound(x_.begin(), x_.end(), t);
  return static_cast<std::size_t>(it - x_.begin()) - 1;
}

double HermiteTable::value(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double h00 = (1.0 + 2.0 * s) * (1.0 - s) * (1.0 - s);
  const double h10 = s * (1.0 - s) * (1.0 - s);
  const double h01 = s * s * (3.0 - 2.0 * s);
  const double h11 = s * s * (s - 1.0);
  return h00 * y_[i] + h10 * h * dy_[i] + h01 * y_[i + 1] + h11 * h * dy_[i + 1];
}

double HermiteTable::slope(double t) const {
  const std::size_t i = segment(t);
  const double h = x_[i + 1] - x_[i];
  const double s = (t - x_[i]) / h;
  const double d00 = 6.0 * s * (s - 1.0) / h;
  const double d10 = (1.0 - s) * (1.0 - 3.0 * s);
  const double d01 = -d00;
  const double d11 = s * (3.0 * s - 2.0);
  return d00 * y_[i] + d10 * dy_[i] + d01 * y_[i + 1] + d11 * dy_[i + 1];
}

}  // namespace tumorstab
