#pragma once

#include <climits>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "tumorstab/spectrum.hpp"
#include "tumorstab/spherical_harmonics.hpp"

namespace tumorstab {

/// Boundary perturbation eta = sum c_lm Y_lm at time t.
struct PerturbationState {
  int L_max = 0;
  Eigen::VectorXd coeffs;  // length (L_max + 1)^2, index l^2 + l + m
  double t = 0.0;

  [[nodiscard]] static PerturbationState zeros(int L_max, double t = 0.0);
  [[nodiscard]] double& at(int l, int m) { return coeffs[static_cast<Eigen::Index>(sh_index(l, m))]; }
  [[nodiscard]] double at(int l, int m) const { return coeffs[static_cast<Eigen::Index>(sh_index(l, m))]; }
  /// Throws ValidationError on a length mismatch or non-finite entries.
  void validate() const;
};

/// Gaussian coefficients with standard deviation (1+l)^-decay on degrees [l_min, l_max].
[[nodiscard]] PerturbationState random_state(int L_max, std::uint64_t seed, int l_min = 0, double decay = 3.0);

/// Multiplier per degree 0..L_max: alpha_0, 0, alpha_l(gamma).
[[nodiscard]] Eigen::VectorXd degree_multipliers(const SpectrumReport& spectrum, double gamma, int L_max);

struct EvolveResult {
  PerturbationState state;
  std::optional<int> saturated_degree;  // first degree whose growth overflowed; clamped to +-max double
};

/// c_lm(t + dt) = c_lm(t) exp(alpha_l dt). Throws ValidationError when the spectrum is shorter than L_max.
[[nodiscard]] EvolveResult evolve(const PerturbationState& state, const SpectrumReport& spectrum, double gamma,
                                  double dt);

struct DegreeBand {
  int l_min = 0;
  int l_max = INT_MAX;
};

/// (sum over the band of (1+l)^(2s) c_lm^2)^(1/2).
[[nodiscard]] double proxy_norm(const PerturbationState& state, DegreeBand band = {}, double s = 2.0);

/// Least-squares slope of log(norm) against t. Needs >= 10 samples with positive norms.
[[nodiscard]] double measured_rate(std::span<const double> times, std::span<const double> norms);

struct TrajectorySample {
  double t = 0.0;
  double norm_total = 0.0;
  double norm_l_ge_2 = 0.0;
  double rate_estimate = 0.0;  // backward secant of log norm_l_ge_2 (forward on the first row)
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  PerturbationState final_state;
  std::optional<int> saturated_degree;
};

/// Samples the flow at `count` uniform times in [0, T].
[[nodiscard]] Trajectory simulate(const PerturbationState& initial, const SpectrumReport& spectrum, double gamma,
                                  double T, int count = 201);

/// Fitted rate of the l >= 2 norm over the second half of the trajectory.
[[nodiscard]] double late_rate(const Trajectory& trajectory);

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory);

struct BoundarySnapshot {
  SphereGrid grid;
  Eigen::MatrixXd radius;  // 1 + epsilon * eta on the grid
  double max_deviation = 0.0;  // epsilon * max |eta|
  bool outside_small_regime = false;  // max_deviation > 0.3
};

[[nodiscard]] BoundarySnapshot boundary_snapshot(const PerturbationState& state, double epsilon, int n_theta = 64,
                                                 int n_phi = 128);

void write_snapshot_csv(std::ostream& os, const BoundarySnapshot& snapshot);

}  // namespace tumorstab
