#include "tumorstab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include <Eigen/QR>

#include "tumorstab/errors.hpp"

namespace tumorstab {

PerturbationState PerturbationState::zeros(int L_max, double t) {
  if (L_max < 0) throw ValidationError("PerturbationState: L_max must be non-negative");
  return {L_max, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sh_count(L_max))), t};
}

void PerturbationState::validate() const {
  if (L_max < 0) throw ValidationError("PerturbationState: L_max must be non-negative");
  if (coeffs.size() != static_cast<Eigen::Index>(sh_count(L_max))) {
    throw ValidationError("PerturbationState: expected (L_max+1)^2 coefficients");
  }
  if (!coeffs.allFinite()) throw ValidationError("PerturbationState: coefficients must be finite");
  if (!std::isfinite(t)) throw ValidationError("PerturbationState: time must be finite");
}

PerturbationState random_state(int L_max, std::uint64_t seed, int l_min, double decay) {
  auto s = PerturbationState::zeros(L_max);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int l = 0; l <= L_max; ++l) {
    for (int m = -l; m <= l; ++m) {
      const double c = normal(rng) * std::pow(1.0 + l, -decay);
      if (l >= l_min) s.at(l, m) = c;
    }
  }
  return s;
}

Eigen::VectorXd degree_multipliers(const SpectrumReport& spectrum, double gamma, int L_max) {
  if (L_max > spectrum.L_max) {
    std::ostringstream os;
    os << "evolve: spectrum covers l <= " << spectrum.L_max << " but the state needs l <= " << L_max;
    throw ValidationError(os.str());
  }
  Eigen::VectorXd a(L_max + 1);
  for (int l = 0; l <= L_max; ++l) a[l] = spectrum.alpha(l, gamma);
  return a;
}

EvolveResult evolve(const PerturbationState& state, const SpectrumReport& spectrum, double gamma, double dt) {
  state.validate();
  if (!std::isfinite(dt)) throw ValidationError("evolve: dt must be finite");
  const auto alpha = degree_multipliers(spectrum, gamma, state.L_max);
  const double log_max = std::log(std::numeric_limits<double>::max());
  EvolveResult out{state, std::nullopt};
  out.state.t = state.t + dt;
  for (int l = 0; l <= state.L_max; ++l) {
    const double exponent = alpha[l] * dt;
    const double factor = std::exp(exponent);
    for (int m = -l; m <= l; ++m) {
      double& c = out.state.at(l, m);
      if (c == 0.0) continue;
      if (std::log(std::abs(c)) + exponent > log_max) {
        c = std::copysign(std::numeric_limits<double>::max(), c);
        if (!out.saturated_degree) out.saturated_degree = l;
        continue;
      }
      c *= factor;
    }
  }
  return out;
}

double proxy_norm(const PerturbationState& state, DegreeBand band, double s) {
  const int lo = std::max(0, band.l_min);
  const int hi = std::min(state.L_max, band.l_max);
  double sum = 0.0;
  for (int l = lo; l <= hi; ++l) {
    const double w = std::pow(1.0 + l, 2.0 * s);
    for (int m = -l; m <= l; ++m) sum += w * state.at(l, m) * state.at(l, m);
  }
  return std::sqrt(sum);
}

double measured_rate(std::span<const double> times, std::span<const double> norms) {
  if (times.size() != norms.size()) throw ValidationError("measured_rate: times and norms differ in length");
  if (times.size() < 10) throw ValidationError("measured_rate: need at least 10 samples");
  Eigen::MatrixXd A(static_cast<Eigen::Index>(times.size()), 2);
  Eigen::VectorXd b(static_cast<Eigen::Index>(times.size()));
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(norms[i] > 0.0) || !std::isfinite(norms[i])) {
      throw DomainError("measured_rate: rate undefined, norms must be positive and finite");
    }
    A(static_cast<Eigen::Index>(i), 0) = 1.0;
    A(static_cast<Eigen::Index>(i), 1) = times[i];
    b[static_cast<Eigen::Index>(i)] = std::log(norms[i]);
  }
  const Eigen::Vector2d fit = A.colPivHouseholderQr().solve(b);
  return fit[1];
}

Trajectory simulate(const PerturbationState& initial, const SpectrumReport& spectrum, double gamma, double T,
                    int count) {
  if (count < 2) throw ValidationError("simulate: need at least two samples");
  if (!(T > 0.0) || !std::isfinite(T)) throw ValidationError("simulate: T must be positive");
  Trajectory traj;
  traj.samples.reserve(static_cast<std::size_t>(count));
  traj.final_state = initial;
  for (int k = 0; k < count; ++k) {
    const double dt = T * k / (count - 1);
    // Each sample evolves from the initial state directly, so no error accumulates across samples.
    auto step = evolve(initial, spectrum, gamma, dt);
    if (step.saturated_degree && !traj.saturated_degree) traj.saturated_degree = step.saturated_degree;
    traj.samples.push_back({step.state.t, proxy_norm(step.state), proxy_norm(step.state, {2, INT_MAX}), 0.0});
    traj.final_state = std::move(step.state);
  }
  auto log_rate = [&](std::size_t a, std::size_t b) {
    const auto& sa = traj.samples[a];
    const auto& sb = traj.samples[b];
    if (!(sa.norm_l_ge_2 > 0.0) || !(sb.norm_l_ge_2 > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return (std::log(sb.norm_l_ge_2) - std::log(sa.norm_l_ge_2)) / (sb.t - sa.t);
  };
  for (std::size_t k = 0; k < traj.samples.size(); ++k) {
    traj.samples[k].rate_estimate = k == 0 ? log_rate(0, 1) : log_rate(k - 1, k);
  }
  return traj;
}

double late_rate(const Trajectory& trajectory) {
  const auto& s = trajectory.samples;
  if (s.empty()) throw ValidationError("late_rate: empty trajectory");
  const double half = 0.5 * s.back().t;
  std::vector<double> t;
  std::vector<double> n;
  for (const auto& x : s) {
    if (x.t >= half) {
      t.push_back(x.t);
      n.push_back(x.norm_l_ge_2);
    }
  }
  return measured_rate(t, n);
}

void write_trajectory_csv(std::ostream& os, const Trajectory& trajectory) {
  const auto old = os.precision(17);
  os << "t,norm_total,norm_l_ge_2,rate_estimate\n";
  for (const auto& s : trajectory.samples) {
    os << s.t << ',' << s.norm_total << ',' << s.norm_l_ge_2 << ',' << s.rate_estimate << '\n';
  }
  os.precision(old);
}

BoundarySnapshot boundary_snapshot(const PerturbationState& state, double epsilon, int n_theta, int n_phi) {
  state.validate();
  BoundarySnapshot snap;
  snap.grid = make_sphere_grid(n_theta, n_phi);
  const Eigen::MatrixXd eta = sh_synthesize(state.coeffs, state.L_max, snap.grid);
  snap.radius = (epsilon * eta).array() + 1.0;
  snap.max_deviation = std::abs(epsilon) * eta.cwiseAbs().maxCoeff();
  snap.outside_small_regime = snap.max_deviation > 0.3;
  return snap;
}

void write_snapshot_csv(std::ostream& os, const BoundarySnapshot& snapshot) {
  const auto old = os.precision(17);
  os << "theta,phi,radius\n";
  for (Eigen::Index i = 0; i < snapshot.grid.theta.size(); ++i) {
    for (Eigen::Index j = 0; j < snapshot.grid.phi.size(); ++j) {
      os << snapshot.grid.theta[i] << ',' << snapshot.grid.phi[j] << ',' << snapshot.radius(i, j) << '\n';
    }
  }
  os.precision(old);
}

}  // namespace tumorstab
