#include "tumorstab/kernels/radial_grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "tumorstab/errors.hpp"

namespace tumorstab {

RadialGrid RadialGrid::chebyshev(double R, std::size_t count) {
  if (!(R > 0.0) || count < 2) throw ValidationError("RadialGrid::chebyshev: need R > 0 and at least 2 nodes");
  RadialGrid grid;
  grid.nodes.resize(count);
  const double n = static_cast<double>(count - 1);
  for (std::size_t k = 0; k < count; ++k) {
    grid.nodes[k] = 0.5 * R * (1.0 - std::cos(std::numbers::pi * static_cast<double>(k) / n));
  }
  grid.nodes.front() = 0.0;
  grid.nodes.back() = R;
  return grid;
}

RadialGrid RadialGrid::uniform(double R, std::size_t count) {
  if (!(R > 0.0) || count < 2) throw ValidationError("RadialGrid::uniform: need R > 0 and at least 2 nodes");
  RadialGrid grid;
  grid.nodes.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    grid.nodes[k] = R * static_cast<double>(k) / static_cast<double>(count - 1);
  }
  grid.nodes.back() = R;
  return grid;
}

void RadialGrid::validate() const {
  if (nodes.size() < 2) throw ValidationError("RadialGrid: fewer than two nodes");
  if (!(nodes.front() >= 0.0)) throw ValidationError("RadialGrid: first node is negative");
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!(nodes[k] > nodes[k - 1])) {
      throw ValidationError("RadialGrid: nodes not strictly increasing at index " + std::to_string(k));
    }
  }
}

RadialGrid RadialGrid::scaled(double factor) const {
  RadialGrid out{nodes};
  for (auto& r : out.nodes) r *= factor;
  return out;
}

}  // namespace tumorstab
