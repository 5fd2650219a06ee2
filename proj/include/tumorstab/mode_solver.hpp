#pragma once

#include <vector>

#include "tumorstab/kernels/hermite.hpp"
#include "tumorstab/kernels/tolerance.hpp"
#include "tumorstab/model.hpp"
#include "tumorstab/radial_stationary.hpp"

namespace tumorstab {

struct ModeOptions {
  Tolerance ode{1e-12, 1e-14};
  Tolerance moment{1e-12, 1e-11};  // quadrature for I_l
  unsigned threads = 1;
};

/// Degree-l nutrient perturbation F_l solving L_l F = f'(sigma_s) F, F regular at 0, F(1) = -sigma_s'(1).
///
/// Stored in factored form F_l(r) = scale * r^l * h(r) with h(0) = 1, so the
/// profile keeps full relative accuracy near the center for any degree.
class ModeProfile {
 public:
  int l = 0;
  double scale = 0.0;           // -sigma_s'(1) / h(1)
  double I_l = 0.0;             // integral of g'(sigma_s) F_l r^(l+2) over [0, 1]
  double J_l = 0.0;             // integral of F_l r^(l+2) over [0, 1]
  double F_prime_at_1 = 0.0;
  double boundary_mismatch = 0.0;  // F_l(1) + sigma_s'(1) right after rescaling
  std::vector<double> nodes;    // stationary grid on [0, 1]
  std::vector<double> F;        // F_l at the nodes (may underflow to 0 near r = 0 for large l)

  [[nodiscard]] double h(double r) const { return h_.value(r); }
  [[nodiscard]] double h_prime(double r) const { return h_prime_.value(r); }
  [[nodiscard]] double value(double r) const;
  [[nodiscard]] double derivative(double r) const;
  /// sign(F_l(r)) without underflow: sign(scale * h(r)).
  [[nodiscard]] double sign_at(double r) const;
  /// log |F_l(r)| for r > 0.
  [[nodiscard]] double log_abs(double r) const;

  void set_tables(HermiteTable h, HermiteTable h_prime) {
    h_ = std::move(h);
    h_prime_ = std::move(h_prime);
  }

 private:
  HermiteTable h_;
  HermiteTable h_prime_;
};

/// Requires a unit-radius stationary state. Throws StepSizeError with the degree on integration failure.
[[nodiscard]] ModeProfile solve_mode(int l, const RadialStationary& st, const ModelFunctions& fns,
                                     const ModeOptions& options = {});

/// Degrees l_min..l_max, computed in parallel; slot k holds degree l_min + k.
[[nodiscard]] std::vector<ModeProfile> solve_modes(int l_min, int l_max, const RadialStationary& st,
                                                   const ModelFunctions& fns, const ModeOptions& options = {});

/// Start radius of the regular series: max(1e-6, 1e-3 / (l + 1)).
[[nodiscard]] double mode_start_radius(int l);

}  // namespace tumorstab
