#pragma once

#include <cstddef>

#include <Eigen/Core>

namespace tumorstab {

/// Flat storage position of Y_lm: l^2 + l + m.
constexpr std::size_t sh_index(int l, int m) {
  return static_cast<std::size_t>(l * l + l + m);
}

constexpr std::size_t sh_count(int L_max) { return static_cast<std::size_t>((L_max + 1) * (L_max + 1)); }

/// Real orthonormal harmonics at (theta, phi): m > 0 ~ cos(m phi), m < 0 ~ sin(|m| phi).
[[nodiscard]] Eigen::VectorXd real_sh_values(int L_max, double theta, double phi);

/// Values and surface-gradient components: grad Y = d_theta e_theta + (1/sin theta) d_phi e_phi.
struct ShGradient {
  Eigen::VectorXd value;
  Eigen::VectorXd d_theta;
  Eigen::VectorXd d_phi_over_sin;
};

/// theta must lie strictly inside (0, pi).
[[nodiscard]] ShGradient real_sh_gradient(int L_max, double theta, double phi);

/// Gauss–Legendre nodes on [-1, 1] (Golub–Welsch).
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
[[nodiscard]] GaussRule gauss_legendre(int n);

/// Gauss–Legendre in cos(theta) times uniform phi; exact for degree < min(2 n_theta, n_phi).
struct SphereGrid {
  Eigen::VectorXd theta;
  Eigen::VectorXd phi;
  Eigen::VectorXd theta_weights;  // Gauss weights in cos(theta)
  [[nodiscard]] double phi_weight() const { return 2.0 * 3.14159265358979323846 / static_cast<double>(phi.size()); }
};
[[nodiscard]] SphereGrid make_sphere_grid(int n_theta, int n_phi);

/// Grid values (n_theta x n_phi) of sum c_lm Y_lm.
[[nodiscard]] Eigen::MatrixXd sh_synthesize(const Eigen::VectorXd& coeffs, int L_max, const SphereGrid& grid);

/// Quadrature projection of grid values onto Y_lm, l <= L_max.
[[nodiscard]] Eigen::VectorXd sh_analyze(const Eigen::MatrixXd& values, int L_max, const SphereGrid& grid);

}  // namespace tumorstab
