#include "tumorstab/radial_stationary.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include <Eigen/Core>

#include "tumorstab/errors.hpp"
#include "tumorstab/kernels/ode.hpp"
#include "tumorstab/kernels/roots.hpp"

namespace tumorstab {

namespace {

using Vec3 = Eigen::Vector3d;

// Smallest center value tried; log(1e-300).
constexpr double kLogCenterFloor = -690.0;
// Stand-in mismatch when the trial solution overflows.
constexpr double kOverflowMismatch = 800.0;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

// u = sigma / c with c = sigma(0): u'' + (2/r) u' = f(c u) / c, q' = g(c u) r^2.
struct ScaledNutrientSystem {
  const ModelFunctions& fns;
  double c;

  Vec3 operator()(double r, const Vec3& y) const {
    const double sigma = c * y[0];
    return {y[1], fns.f(sigma) / c - 2.0 * y[1] / r, fns.g(sigma) * r * r};
  }

  [[nodiscard]] Vec3 series(double r) const {
    const double k = fns.f(c) / c;
    return {1.0 + k * r * r / 6.0, k * r / 3.0, fns.g(c) * r * r * r / 3.0};
  }
};

Trajectory<Vec3> shoot(const ModelFunctions& fns, double R, double c, const StationaryOptions& opt,
                       std::span<const double> breakpoints = {}) {
  const ScaledNutrientSystem sys{fns, c};
  const double r0 = std::min(opt.start_radius, 1e-3 * R);
  return integrate_ivp(sys, r0, R, sys.series(r0), opt.ode, breakpoints);
}

// log sigma(R) for center value exp(log_c); zero at the admissible center value.
double boundary_mismatch(const ModelFunctions& fns, double R, double log_c, const StationaryOptions& opt) {
  try {
    const auto traj = shoot(fns, R, std::exp(log_c), opt);
    const double u = traj.final_state()[0];
    if (!(u > 0.0) || !std::isfinite(u)) return kOverflowMismatch;
    return std::min(kOverflowMismatch, log_c + std::log(u));
  } catch (const NumericalError&) {
    return kOverflowMismatch;
  }
}

double solve_center_log(const ModelFunctions& fns, double R, const StationaryOptions& opt) {
  const double at_one = boundary_mismatch(fns, R, 0.0, opt);
  if (at_one == 0.0) return 0.0;
  if (at_one < 0.0) {
    throw BracketError("solve_sigma_profile: sigma(R) < 1 even for sigma(0) = 1 at R = " + fmt(R));
  }
  double lo = std::max(kLogCenterFloor, -at_one - 1.0);
  double m_lo = boundary_mismatch(fns, R, lo, opt);
  while (m_lo >= 0.0 && lo > kLogCenterFloor) {
    lo = std::max(kLogCenterFloor, lo - std::max(1.0, m_lo + 1.0));
    m_lo = boundary_mismatch(fns, R, lo, opt);
  }
  if (m_lo >= 0.0) {
    throw BracketError("solve_sigma_profile: no shooting bracket for sigma(0) in [exp(" + fmt(lo) +
                       "), 1] at R = " + fmt(R));
  }
  return find_root(
      [&](double s) { return boundary_mismatch(fns, R, s, opt); }, lo, 0.0, Tolerance{1e-16, 1e-15});
}

}  // namespace

NutrientProfile solve_sigma_profile(const ModelFunctions& fns, double R, const StationaryOptions& opt) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("solve_sigma_profile: R must be positive");
  const double c = std::exp(solve_center_log(fns, R, opt));

  NutrientProfile prof;
  prof.grid = RadialGrid::chebyshev(R, opt.grid_nodes);
  const auto& nodes = prof.grid.nodes;
  const auto traj = shoot(fns, R, c, opt, nodes);
  const ScaledNutrientSystem sys{fns, c};
  const double r0 = traj.r.front();

  const std::size_t n = nodes.size();
  prof.sigma.resize(n);
  prof.sigma_prime.resize(n);
  prof.sigma_second.resize(n);
  prof.mass.resize(n);
  std::size_t j = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double r = nodes[k];
    Vec3 y;
    if (r <= r0) {
      y = sys.series(r);
    } else {
      while (j + 1 < traj.r.size() && traj.r[j] < r) ++j;
      y = traj.r[j] == r ? traj.y[j] : traj.at(r);
    }
    prof.sigma[k] = c * y[0];
    prof.sigma_prime[k] = c * y[1];
    prof.mass[k] = y[2];
    prof.sigma_second[k] =
        r > 0.0 ? fns.f(prof.sigma[k]) - 2.0 * prof.sigma_prime[k] / r : fns.f(prof.sigma[k]) / 3.0;
  }
  prof.center_value = c;
  prof.sigma_prime_at_R = prof.sigma_prime.back();
  prof.mass_balance = prof.mass.back();
  return prof;
}

double mass_balance_residual(const ModelFunctions& fns, double R, const StationaryOptions& opt) {
  if (!(R > 0.0) || !std::isfinite(R)) throw DomainError("mass_balance_residual: R must be positive");
  const double c = std::exp(solve_center_log(fns, R, opt));
  return shoot(fns, R, c, opt).final_state()[2];
}

std::vector<double> find_stationary_radii(const ModelFunctions& fns, double lo, double hi,
                                          const StationaryOptions& opt) {
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("find_stationary_radii: need 0 < lo < hi");
  const int n = std::max(2, opt.scan_points);
  std::vector<double> radii(static_cast<std::size_t>(n));
  std::vector<double> values(radii.size());
  for (int k = 0; k < n; ++k) {
    radii[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, static_cast<double>(k) / (n - 1));
  }
  radii.back() = hi;
  for (std::size_t k = 0; k < radii.size(); ++k) values[k] = mass_balance_residual(fns, radii[k], opt);

  std::vector<double> roots;
  for (std::size_t k = 0; k + 1 < radii.size(); ++k) {
    if (values[k] == 0.0) {
      roots.push_back(radii[k]);
      continue;
    }
    if ((values[k] > 0.0) != (values[k + 1] > 0.0) && values[k + 1] != 0.0) {
      roots.push_back(find_root([&](double R) { return mass_balance_residual(fns, R, opt); }, radii[k],
                                radii[k + 1], Tolerance{1e-15, 1e-15}));
    }
  }
  if (values.back() == 0.0) roots.push_back(radii.back());
  return roots;
}

void RadialStationary::build_interpolants(const ModelFunctions& fns) {
  const auto& x = grid.nodes;
  const std::size_t n = x.size();
  std::vector<double> v_slope(n);
  std::vector<double> p_slope(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = x[k];
    const double gs = fns.g(sigma_s[k]);
    v_slope[k] = r > 0.0 ? gs - 2.0 * v_s[k] / r : gs / 3.0;
    p_slope[k] = 4.0 / 3.0 * fns.g_prime(sigma_s[k]) * sigma_s_prime[k];
  }
  sigma_table_ = HermiteTable(x, sigma_s, sigma_s_prime);
  sigma_prime_table_ = HermiteTable(x, sigma_s_prime, sigma_s_second);
  v_table_ = HermiteTable(x, v_s, std::move(v_slope));
  p_table_ = HermiteTable(x, p_s, std::move(p_slope));
}

RadialStationary stationary_at_radius(const ModelFunctions& fns, double gamma, double R,
                                      const StationaryOptions& opt) {
  const auto prof = solve_sigma_profile(fns, R, opt);
  RadialStationary st;
  st.R_s = R;
  st.gamma = gamma;
  st.grid = prof.grid;
  st.sigma_s = prof.sigma;
  st.sigma_s_prime = prof.sigma_prime;
  st.sigma_s_second = prof.sigma_second;
  st.sigma_center = prof.center_value;
  st.sigma_s_prime_at_R = prof.sigma_prime_at_R;
  st.mass_balance = prof.mass_balance;
  const std::size_t n = st.grid.size();
  st.v_s.resize(n);
  st.p_s.resize(n);
  const double r0 = std::min(opt.start_radius, 1e-3 * R);
  for (std::size_t k = 0; k < n; ++k) {
    const double r = st.grid.nodes[k];
    // Below the series start v_s = g(sigma(0)) r / 3 to second order.
    st.v_s[k] = r > r0 ? prof.mass[k] / (r * r) : fns.g(prof.center_value) * r / 3.0;
    st.p_s[k] = gamma / R + 4.0 / 3.0 * fns.g(st.sigma_s[k]);
  }
  st.build_interpolants(fns);
  return st;
}

std::vector<std::string> stationary_violations(const RadialStationary& st, const ModelFunctions& fns) {
  std::vector<std::string> out;
  const auto& x = st.grid.nodes;
  const double R = st.R_s;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double s = st.sigma_s[k];
    if (!(s > 0.0) || s > 1.0 + 1e-12) {
      out.push_back("sigma_s out of (0, 1] at r=" + fmt(x[k]) + ": " + fmt(s));
      break;
    }
  }
  if (std::abs(st.sigma_s.back() - 1.0) > 1e-10) out.push_back("sigma_s(R_s) != 1: " + fmt(st.sigma_s.back()));
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (st.sigma_s_prime[k] < -1e-10) {
      out.push_back("sigma_s' negative at r=" + fmt(x[k]) + ": " + fmt(st.sigma_s_prime[k]));
      break;
    }
  }
  if (std::abs(st.v_s.front()) > 1e-8) out.push_back("v_s(0) != 0: " + fmt(st.v_s.front()));
  if (std::abs(st.v_s.back()) > 1e-8) out.push_back("v_s(R_s) != 0: " + fmt(st.v_s.back()));
  for (std::size_t k = 1; k + 1 < x.size(); ++k) {
    const bool core = x[k] >= 0.05 * R && x[k] <= 0.95 * R;
    if ((core && !(st.v_s[k] < 0.0)) || (!core && st.v_s[k] > 1e-8)) {
      out.push_back("v_s not negative at r=" + fmt(x[k]) + ": " + fmt(st.v_s[k]));
      break;
    }
  }
  const double p_gap = st.p_s.back() - st.gamma / R - 4.0 / 3.0 * fns.g(1.0);
  if (std::abs(p_gap) > 1e-8) out.push_back("p_s(R_s) - gamma/R_s - (4/3) g(1) = " + fmt(p_gap));
  return out;
}

RadialStationary find_stationary(const ModelFunctions& fns, double gamma, std::pair<double, double> bracket,
                                 const StationaryOptions& opt) {
  auto [lo, hi] = bracket;
  if (!(lo > 0.0) || !(hi > lo)) throw ValidationError("find_stationary: need 0 < R_lo < R_hi");
  double m_hi = mass_balance_residual(fns, hi, opt);
  while (m_hi > 0.0 && hi < opt.radius_cap) {
    hi = std::min(2.0 * hi, opt.radius_cap);
    m_hi = mass_balance_residual(fns, hi, opt);
  }
  double m_lo = mass_balance_residual(fns, lo, opt);
  while (m_lo < 0.0 && lo > opt.radius_floor) {
    lo = std::max(0.5 * lo, opt.radius_floor);
    m_lo = mass_balance_residual(fns, lo, opt);
  }
  if ((m_lo > 0.0) == (m_hi > 0.0) && m_lo != 0.0 && m_hi != 0.0) {
    throw BracketError("find_stationary: mass balance does not change sign on [" + fmt(lo) + ", " + fmt(hi) +
                       "] (m = " + fmt(m_lo) + ", " + fmt(m_hi) + ")");
  }

  const auto roots = find_stationary_radii(fns, lo, hi, opt);
  if (roots.empty()) {
    throw BracketError("find_stationary: no stationary radius resolved on [" + fmt(lo) + ", " + fmt(hi) + "]");
  }
  if (roots.size() > 1) {
    std::string msg = "find_stationary: several stationary radii on [" + fmt(lo) + ", " + fmt(hi) + "]:";
    for (double r : roots) msg += " " + fmt(r);
    msg += "; narrow the bracket to select one";
    throw NumericalError(msg);
  }

  auto st = stationary_at_radius(fns, gamma, roots.front(), opt);
  if (std::abs(st.mass_balance) > 1e-9) {
    throw PostconditionError("find_stationary: |m(R_s)| = " + fmt(std::abs(st.mass_balance)) + " > 1e-9");
  }
  const auto bad = stationary_violations(st, fns);
  if (!bad.empty()) {
    std::string msg = "find_stationary: stationary state violates invariants:";
    for (const auto& b : bad) msg += "\n  " + b;
    throw PostconditionError(msg);
  }
  return st;
}

UnitStationary rescale_to_unit(const RadialStationary& st, const ModelFunctions& fns) {
  const double R = st.R_s;
  UnitStationary out;
  out.functions = fns.scaled(R * R);
  RadialStationary& u = out.state;
  u.R_s = 1.0;
  u.gamma = st.gamma * R;
  u.grid = st.grid.scaled(1.0 / R);
  u.grid.nodes.back() = 1.0;
  u.sigma_s = st.sigma_s;
  u.sigma_s_prime = st.sigma_s_prime;
  u.sigma_s_second = st.sigma_s_second;
  u.v_s = st.v_s;
  u.p_s = st.p_s;
  for (auto& d : u.sigma_s_prime) d *= R;
  for (auto& d : u.sigma_s_second) d *= R * R;
  for (auto& v : u.v_s) v *= R;
  for (auto& p : u.p_s) p *= R * R;
  u.sigma_center = st.sigma_center;
  u.sigma_s_prime_at_R = st.sigma_s_prime_at_R * R;
  u.mass_balance = st.mass_balance / R;  // (R^2 g) integrated against (r/R)^2 d(r/R)
  u.build_interpolants(out.functions);
  return out;
}

void write_profile_csv(std::ostream& os, const RadialStationary& st) {
  const auto old = os.precision(17);
  os << "r,sigma_s,v_s,p_s\n";
  for (std::size_t k = 0; k < st.grid.size(); ++k) {
    os << st.grid.nodes[k] << ',' << st.sigma_s[k] << ',' << st.v_s[k] << ',' << st.p_s[k] << '\n';
  }
  os.precision(old);
}

}  // namespace tumorstab
