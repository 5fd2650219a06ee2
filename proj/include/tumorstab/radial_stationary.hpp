#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "tumorstab/kernels/hermite.hpp"
#include "tumorstab/kernels/radial_grid.hpp"
#include "tumorstab/kernels/tolerance.hpp"
#include "tumorstab/model.hpp"

namespace tumorstab {

struct StationaryOptions {
  Tolerance ode{1e-12, 1e-14};
  std::size_t grid_nodes = 2049;
  double start_radius = 1e-6;  // series start for the 2/r singularity
  double radius_cap = 1e3;     // geometric bracket expansion limit
  double radius_floor = 1e-3;
  int scan_points = 48;        // geometric samples used to detect multiple roots
};

/// Solution of sigma'' + (2/r) sigma' = f(sigma), sigma'(0) = 0, sigma(R) = 1 on a grid.
struct NutrientProfile {
  RadialGrid grid;
  std::vector<double> sigma;
  std::vector<double> sigma_prime;
  std::vector<double> sigma_second;
  std::vector<double> mass;  // cumulative integral of g(sigma) s^2 from 0 to r
  double center_value = 0.0;
  double sigma_prime_at_R = 0.0;
  double mass_balance = 0.0;  // mass at r = R
};

/// Shoots on log sigma(0); throws BracketError when no admissible center value exists.
[[nodiscard]] NutrientProfile solve_sigma_profile(const ModelFunctions& fns, double R,
                                                  const StationaryOptions& options = {});

/// m(R) = integral of g(sigma_R(r)) r^2 over [0, R]; positive for small R, negative for large R.
[[nodiscard]] double mass_balance_residual(const ModelFunctions& fns, double R, const StationaryOptions& options = {});

/// Every sign change of m found on a geometric scan of [lo, hi], each refined by Brent.
[[nodiscard]] std::vector<double> find_stationary_radii(const ModelFunctions& fns, double lo, double hi,
                                                        const StationaryOptions& options = {});

/// Radially symmetric stationary state (sigma_s, v_s, p_s, R_s).
struct RadialStationary {
  double R_s = 0.0;
  double gamma = 0.0;
  RadialGrid grid;
  std::vector<double> sigma_s;
  std::vector<double> sigma_s_prime;
  std::vector<double> sigma_s_second;
  std::vector<double> v_s;
  std::vector<double> p_s;
  double sigma_center = 0.0;
  double sigma_s_prime_at_R = 0.0;
  double mass_balance = 0.0;

  [[nodiscard]] double sigma(double r) const { return sigma_table_.value(r); }
  [[nodiscard]] double sigma_prime(double r) const { return sigma_prime_table_.value(r); }
  [[nodiscard]] double v(double r) const { return v_table_.value(r); }
  [[nodiscard]] double p(double r) const { return p_table_.value(r); }

  /// Builds the interpolants from the tabulated arrays; `fns` supplies slopes of v_s and p_s.
  void build_interpolants(const ModelFunctions& fns);

 private:
  HermiteTable sigma_table_;
  HermiteTable sigma_prime_table_;
  HermiteTable v_table_;
  HermiteTable p_table_;
};

/// Human-readable invariant violations; empty when the state is admissible.
[[nodiscard]] std::vector<std::string> stationary_violations(const RadialStationary& st, const ModelFunctions& fns);

/// Locates R_s on `bracket` (expanded geometrically when needed) and tabulates the profiles.
/// Throws BracketError without a sign change, NumericalError when several radii are found.
[[nodiscard]] RadialStationary find_stationary(const ModelFunctions& fns, double gamma,
                                               std::pair<double, double> bracket = {0.1, 20.0},
                                               const StationaryOptions& options = {});

/// Profiles on [0, R] for a prescribed radius, without imposing the mass balance.
[[nodiscard]] RadialStationary stationary_at_radius(const ModelFunctions& fns, double gamma, double R,
                                                    const StationaryOptions& options = {});

struct UnitStationary {
  RadialStationary state;
  ModelFunctions functions;
};

/// Maps r -> r / R_s. f and g are multiplied by R_s^2, v_s by R_s, p_s by R_s^2 and gamma by R_s.
[[nodiscard]] UnitStationary rescale_to_unit(const RadialStationary& st, const ModelFunctions& fns);

/// CSV with header `r,sigma_s,v_s,p_s`, 17 significant digits.
void write_profile_csv(std::ostream& os, const RadialStationary& st);

}  // namespace tumorstab
