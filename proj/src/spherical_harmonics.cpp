#include "tumorstab/spherical_harmonics.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "tumorstab/errors.hpp"

namespace tumorstab {

namespace {

// Orthonormal associated Legendre values Pbar_l^m(cos theta), m >= 0, stored at sh_index(l, m).
Eigen::VectorXd normalized_legendre(int L, double x, double s) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sh_count(L)));
  double pmm = 0.5 / std::sqrt(std::numbers::pi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p[static_cast<Eigen::Index>(sh_index(m, m))] = pmm;
    if (m + 1 > L) continue;
    double prev = pmm;
    double cur = x * std::sqrt(2.0 * m + 3.0) * pmm;
    p[static_cast<Eigen::Index>(sh_index(m + 1, m))] = cur;
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      const double next = a * (x * cur - b * prev);
      prev = cur;
      cur = next;
      p[static_cast<Eigen::Index>(sh_index(l, m))] = cur;
    }
  }
  return p;
}

}  // namespace

Eigen::VectorXd real_sh_values(int L, double theta, double phi) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  const auto p = normalized_legendre(L, x, s);
  Eigen::VectorXd y(static_cast<Eigen::Index>(sh_count(L)));
  for (int l = 0; l <= L; ++l) {
    y[static_cast<Eigen::Index>(sh_index(l, 0))] = p[static_cast<Eigen::Index>(sh_index(l, 0))];
    for (int m = 1; m <= l; ++m) {
      const double plm = std::numbers::sqrt2 * p[static_cast<Eigen::Index>(sh_index(l, m))];
      y[static_cast<Eigen::Index>(sh_index(l, m))] = plm * std::cos(m * phi);
      y[static_cast<Eigen::Index>(sh_index(l, -m))] = plm * std::sin(m * phi);
    }
  }
  return y;
}

ShGradient real_sh_gradient(int L, double theta, double phi) {
  const double x = std::cos(theta);
  const double s = std::sin(theta);
  if (!(s > 0.0)) throw DomainError("real_sh_gradient: theta must lie strictly inside (0, pi)");
  const auto p = normalized_legendre(L, x, s);
  const auto n = static_cast<Eigen::Index>(sh_count(L));
  ShGradient out{Eigen::VectorXd(n), Eigen::VectorXd(n), Eigen::VectorXd(n)};
  for (int l = 0; l <= L; ++l) {
    for (int m = 0; m <= l; ++m) {
      const double plm = p[static_cast<Eigen::Index>(sh_index(l, m))];
      const double plm1 = l - 1 >= m ? p[static_cast<Eigen::Index>(sh_index(l - 1, m))] : 0.0;
      // dPbar_l^m/dtheta = [l x Pbar_l^m - sqrt((2l+1)(l^2-m^2)/(2l-1)) Pbar_{l-1}^m] / sin theta
      const double coupling =
          l > 0 ? std::sqrt((2.0 * l + 1.0) * (static_cast<double>(l) * l - static_cast<double>(m) * m) / (2.0 * l - 1.0))
                : 0.0;
      const double dplm = (l * x * plm - coupling * plm1) / s;
      if (m == 0) {
        const auto i = static_cast<Eigen::Index>(sh_index(l, 0));
        out.value[i] = plm;
        out.d_theta[i] = dplm;
        out.d_phi_over_sin[i] = 0.0;
        continue;
      }
      const double c = std::cos(m * phi);
      const double sn = std::sin(m * phi);
      const double k = std::numbers::sqrt2;
      const auto ic = static_cast<Eigen::Index>(sh_index(l, m));
      const auto is = static_cast<Eigen::Index>(sh_index(l, -m));
      out.value[ic] = k * plm * c;
      out.value[is] = k * plm * sn;
      out.d_theta[ic] = k * dplm * c;
      out.d_theta[is] = k * dplm * sn;
      out.d_phi_over_sin[ic] = -k * m * plm * sn / s;
      out.d_phi_over_sin[is] = k * m * plm * c / s;
    }
  }
  return out;
}

GaussRule gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: need at least one node");
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    const double b = k / std::sqrt(4.0 * k * k - 1.0);
    J(k, k - 1) = b;
    J(k - 1, k) = b;
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  GaussRule rule;
  rule.nodes = es.eigenvalues();
  rule.weights = 2.0 * es.eigenvectors().row(0).array().square().transpose();
  return rule;
}

SphereGrid make_sphere_grid(int n_theta, int n_phi) {
  if (n_theta < 1 || n_phi < 1) throw ValidationError("make_sphere_grid: grid must be non-empty");
  const auto rule = gauss_legendre(n_theta);
  SphereGrid grid;
  grid.theta = rule.nodes.array().acos();
  grid.theta_weights = rule.weights;
  grid.phi = Eigen::VectorXd::LinSpaced(n_phi, 0.0, 2.0 * std::numbers::pi * (n_phi - 1) / n_phi);
  return grid;
}

Eigen::MatrixXd sh_synthesize(const Eigen::VectorXd& coeffs, int L, const SphereGrid& grid) {
  if (coeffs.size() != static_cast<Eigen::Index>(sh_count(L))) {
    throw ValidationError("sh_synthesize: coefficient count does not match L_max");
  }
  Eigen::MatrixXd out(grid.theta.size(), grid.phi.size());
  for (Eigen::Index i = 0; i < grid.theta.size(); ++i) {
    for (Eigen::Index j = 0; j < grid.phi.size(); ++j) {
      out(i, j) = real_sh_values(L, grid.theta[i], grid.phi[j]).dot(coeffs);
    }
  }
  return out;
}

Eigen::VectorXd sh_analyze(const Eigen::MatrixXd& values, int L, const SphereGrid& grid) {
  if (values.rows() != grid.theta.size() || values.cols() != grid.phi.size()) {
    throw ValidationError("sh_analyze: value grid does not match sphere grid");
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sh_count(L)));
  const double wphi = grid.phi_weight();
  for (Eigen::Index i = 0; i < grid.theta.size(); ++i) {
    for (Eigen::Index j = 0; j < grid.phi.size(); ++j) {
      c += (grid.theta_weights[i] * wphi * values(i, j)) * real_sh_values(L, grid.theta[i], grid.phi[j]);
    }
  }
  return c;
}

}  // namespace tumorstab
