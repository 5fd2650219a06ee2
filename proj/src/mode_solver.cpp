#include "tumorstab/mode_solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/Core>

#include "tumorstab/errors.hpp"
#include "tumorstab/kernels/ode.hpp"
#include "tumorstab/kernels/parallel.hpp"
#include "tumorstab/kernels/quadrature.hpp"

namespace tumorstab {

namespace {

using Vec2 = Eigen::Vector2d;

// F = r^l h turns L_l F = f'(sigma_s) F into h'' + 2(l+1)/r h' = f'(sigma_s) h.
struct FactoredModeSystem {
  const RadialStationary& st;
  const ModelFunctions& fns;
  double two_l_plus_2;

  Vec2 operator()(double r, const Vec2& y) const {
    return {y[1], fns.f_prime(st.sigma(r)) * y[0] - two_l_plus_2 * y[1] / r};
  }
};

}  // namespace

double mode_start_radius(int l) { return std::max(1e-6, 1e-3 / (l + 1.0)); }

double ModeProfile::value(double r) const {
  if (r <= 0.0) return l == 0 ? scale * h_.value(0.0) : 0.0;
  return scale * std::pow(r, l) * h_.value(r);
}

double ModeProfile::derivative(double r) const {
  if (r <= 0.0) return l == 1 ? scale * h_.value(0.0) : 0.0;
  const double rl = std::pow(r, l);
  return scale * (l * rl / r * h_.value(r) + rl * h_prime_.value(r));
}

double ModeProfile::sign_at(double r) const {
  const double s = scale * h_.value(r);
  return s > 0.0 ? 1.0 : (s < 0.0 ? -1.0 : 0.0);
}

double ModeProfile::log_abs(double r) const { return std::log(std::abs(scale * h_.value(r))) + l * std::log(r); }

ModeProfile solve_mode(int l, const RadialStationary& st, const ModelFunctions& fns, const ModeOptions& opt) {
  if (l < 0) throw DegreeError("solve_mode: degree must be >= 0, got " + std::to_string(l));
  if (std::abs(st.R_s - 1.0) > 1e-12) {
    throw ValidationError("solve_mode: stationary state must be rescaled to R_s = 1 (got " +
                          std::to_string(st.R_s) + ")");
  }
  const auto& nodes = st.grid.nodes;
  const FactoredModeSystem sys{st, fns, 2.0 * l + 2.0};
  const double r0 = mode_start_radius(l);
  const double a = fns.f_prime(st.sigma_center) / (4.0 * l + 6.0);
  const Vec2 y0{1.0 + a * r0 * r0, 2.0 * a * r0};

  Trajectory<Vec2> traj;
  try {
    traj = integrate_ivp(sys, r0, 1.0, y0, opt.ode, nodes);
  } catch (const NumericalError& e) {
    throw StepSizeError("solve_mode: integration failed for degree l = " + std::to_string(l) + " (largest stable l is " +
                        std::to_string(l - 1) + "): " + e.what());
  }

  const std::size_t n = nodes.size();
  std::vector<double> h(n);
  std::vector<double> hp(n);
  std::vector<double> hpp(n);
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = nodes[k];
    Vec2 y;
    if (r <= r0) {
      y = Vec2{1.0 + a * r * r, 2.0 * a * r};
    } else {
      while (j + 1 < traj.r.size() && traj.r[j] < r) ++j;
      y = traj.r[j] == r ? traj.y[j] : traj.at(r);
    }
    h[k] = y[0];
    hp[k] = y[1];
    hpp[k] = r > 0.0 ? fns.f_prime(st.sigma_s[k]) * y[0] - (2.0 * l + 2.0) * y[1] / r
                     : fns.f_prime(st.sigma_s[k]) / (2.0 * l + 3.0);
  }

  ModeProfile mode;
  mode.l = l;
  mode.nodes = nodes;
  const double sigma_prime_1 = st.sigma_s_prime_at_R;
  mode.scale = -sigma_prime_1 / h.back();
  mode.boundary_mismatch = mode.scale * h.back() + sigma_prime_1;
  if (std::abs(mode.boundary_mismatch) >= 1e-12) {
    throw PostconditionError("solve_mode: boundary value mismatch " + std::to_string(mode.boundary_mismatch));
  }
  mode.F.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    mode.F[k] = nodes[k] > 0.0 ? mode.scale * std::pow(nodes[k], l) * h[k] : (l == 0 ? mode.scale * h[k] : 0.0);
  }
  mode.F_prime_at_1 = mode.scale * (l * h.back() + hp.back());
  mode.set_tables(HermiteTable(nodes, h, hp), HermiteTable(nodes, hp, hpp));

  // I_l = scale * integral of g'(sigma_s) h r^(2l+2).
  const double two_l_2 = 2.0 * l + 2.0;
  const double integral = quad(
      [&](double r) { return fns.g_prime(st.sigma(r)) * mode.h(r) * std::pow(r, two_l_2); }, 0.0, 1.0,
      opt.moment);
  mode.I_l = mode.scale * integral;
  mode.J_l = mode.scale * quad([&](double r) { return mode.h(r) * std::pow(r, two_l_2); }, 0.0, 1.0, opt.moment);
  return mode;
}

std::vector<ModeProfile> solve_modes(int l_min, int l_max, const RadialStationary& st, const ModelFunctions& fns,
                                     const ModeOptions& opt) {
  if (l_min < 0 || l_max < l_min) throw DegreeError("solve_modes: need 0 <= l_min <= l_max");
  std::vector<ModeProfile> out(static_cast<std::size_t>(l_max - l_min + 1));
  parallel_for(out.size(), opt.threads,
               [&](std::size_t k) { out[k] = solve_mode(l_min + static_cast<int>(k), st, fns, opt); });
  return out;
}

}  // namespace tumorstab
