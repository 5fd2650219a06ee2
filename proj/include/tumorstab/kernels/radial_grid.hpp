#pragma once

#include <cstddef>
#include <vector>

namespace tumorstab {

/// Strictly increasing radii on [0, R]; the last node is R.
struct RadialGrid {
  std::vector<double> nodes;

  [[nodiscard]] double outer_radius() const { return nodes.back(); }
  [[nodiscard]] std::size_t size() const { return nodes.size(); }

  /// Chebyshev–Lobatto clustering, dense near both ends.
  static RadialGrid chebyshev(double R, std::size_t count);
  static RadialGrid uniform(double R, std::size_t count);

  /// Throws ValidationError when the invariants do not hold.
  void validate() const;

  [[nodiscard]] RadialGrid scaled(double factor) const;
};

}  // namespace tumorstab
