#pragma once

#include <span>
#include <string>
#include <vector>

#include "tumorstab/errors.hpp"
#include "tumorstab/mode_solver.hpp"
#include "tumorstab/model.hpp"
#include "tumorstab/radial_stationary.hpp"

namespace tumorstab {

/// gamma_l = 4(2l+3)(l+1) / [l(l+2)(2l+1)] * [g(1) + I_l], l >= 2.
/// Throws ContradictionError when the bracket g(1) + I_l is not positive.
[[nodiscard]] double gamma_threshold_l(const ModeProfile& mode, const ModelFunctions& fns);

/// Porous-medium counterpart 2 / [l(l-1)(l+2)] * [g(1) + g'(1) * integral of F_l r^(l+2)].
[[nodiscard]] double darcy_gamma_l(const ModeProfile& mode, const ModelFunctions& fns);

/// d alpha_l / d gamma = -l(l+2)(2l+1) / [4(2l^2+4l+3)].
[[nodiscard]] double alpha_slope(int l);

/// alpha_l(gamma) = alpha_slope(l) * (gamma - gamma_l) for l >= 2.
[[nodiscard]] double alpha_l(int l, double gamma, double gamma_l);

/// alpha_0 = g(1) + integral of g'(sigma_s) F_0 r^2.
[[nodiscard]] double alpha_zero(const ModeProfile& mode0, const ModelFunctions& fns);

struct TailCertificate {
  bool satisfied = false;
  int l_bar = -1;          // start of the final strictly decreasing run
  int decreasing_run = 0;  // number of consecutive decreases ending at L_max
  double gamma_at_L_max = 0.0;
};

struct ThresholdResult {
  double gamma_star = 0.0;
  int l_star = -1;
  bool tie = false;  // another degree within 1e-12 of the maximum; smaller l reported
  TailCertificate certificate;
};

/// Maximum of values[k] (degree first_degree + k) with tail certificate; needs >= 1 value.
[[nodiscard]] ThresholdResult threshold_from_values(std::span<const double> values, int first_degree = 2,
                                                    int min_decreasing_run = 8);

struct SpectrumOptions {
  int L_max = 64;
  int L_cap = 512;
  bool require_certificate = true;
  ModeOptions modes;
};

struct SpectrumReport {
  int L_max = 0;
  double alpha_0 = 0.0;
  std::vector<double> I_l;            // indexed by l, 0..L_max
  std::vector<double> gamma_l;        // indexed by l; NaN for l < 2
  std::vector<double> gamma_tilde_l;  // indexed by l; NaN for l < 2
  double gamma_star = 0.0;
  int l_star = -1;
  bool l_star_tie = false;
  TailCertificate certificate;
  double gamma_tilde_star = 0.0;
  int l_tilde_star = -1;

  /// alpha_0 for l = 0, 0 for l = 1, alpha_l(gamma) for 2 <= l <= L_max.
  [[nodiscard]] double alpha(int l, double gamma) const;
};

/// Raised when doubling L_max up to the cap never yields a tail certificate.
class SpectrumTruncationError : public TruncationError {
 public:
  SpectrumTruncationError(const std::string& what, SpectrumReport partial)
      : TruncationError(what), partial_(std::move(partial)) {}
  [[nodiscard]] const SpectrumReport& partial_report() const { return partial_; }

 private:
  SpectrumReport partial_;
};

[[nodiscard]] SpectrumReport spectrum_from_modes(const std::vector<ModeProfile>& modes, const ModelFunctions& fns);

/// Modes 0..L_max on a unit-radius state, doubling L_max until the tail certificate holds.
[[nodiscard]] SpectrumReport compute_spectrum(const RadialStationary& unit_state, const ModelFunctions& fns,
                                              const SpectrumOptions& options = {});

enum class Stability { stable, unstable, marginal };

[[nodiscard]] std::string to_string(Stability s);

struct Eigenvalue {
  double value = 0.0;
  int l = 0;
  int multiplicity = 0;
};

struct SpectrumClassification {
  double gamma = 0.0;
  std::vector<Eigenvalue> eigenvalues;  // descending by value
  Stability stability = Stability::marginal;
};

/// Eigenvalues of the linearised boundary operator for degrees 0..L_max with multiplicities.
[[nodiscard]] SpectrumClassification full_spectrum(double gamma, const SpectrumReport& report);

}  // namespace tumorstab
