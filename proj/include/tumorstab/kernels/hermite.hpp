#pragma once

#include <cstddef>
#include <vector>

namespace tumorstab {

/// Piecewise cubic Hermite interpolant through (x_i, y_i) with prescribed slopes.
///
/// When the slopes are the exact derivatives of the sampled function the
/// interpolant is fourth-order accurate, and it is monotone on any interval
/// where the data and slopes are.
class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> y, std::vector<double> dy);

  [[nodiscard]] double value(double t) const;
  [[nodiscard]] double slope(double t) const;

  [[nodiscard]] const std::vector<double>& knots() const { return x_; }
  [[nodiscard]] const std::vector<double>& values() const { return y_; }
  [[nodiscard]] const std::vector<double>& slopes() const { return dy_; }
  [[nodiscard]] bool empty() const { return x_.empty(); }

 private:
  [[nodiscard]] std::size_t segment(double t) const;

  std::vector<double> x_;
  std::vector<double> y_;
  std::vector<double> dy_;
};

}  // namespace tumorstab
