#pragma once

#include <functional>
#include <string>
#include <vector>

#include <json.hpp>

namespace tumorstab {

/// Constants of the linear constitutive pair f(s) = lambda s, g(s) = mu (s - sigma_c).
struct ModelParams {
  double lambda = 1.0;     // nutrient consumption rate
  double mu = 1.0;         // proliferation rate
  double sigma_c = 0.5;    // concentration where proliferation balances death
  double sigma_bar = 1.0;  // exterior nutrient concentration
  double nu = 1.0;         // viscosity
  double gamma = 1.0;      // surface tension
};

using ScalarLaw = std::function<double(double)>;

/// Nutrient consumption f and proliferation g, in normalised units (sigma_bar = nu = 1).
struct ModelFunctions {
  ScalarLaw f;
  ScalarLaw f_prime;
  ScalarLaw g;
  ScalarLaw g_prime;
  ScalarLaw g_second;  // optional; estimated by differencing g_prime when empty
  double sigma_c = 0.0;

  [[nodiscard]] double g_second_at(double s) const;

  /// f and g (and their derivatives) multiplied by `factor`; sigma_c is unchanged.
  [[nodiscard]] ModelFunctions scaled(double factor) const;
};

/// Normalised model plus the effective surface tension gamma / nu.
struct NormalizedModel {
  ModelFunctions functions;
  double gamma = 0.0;
};

/// Throws ValidationError naming the violated assumption.
void validate_params(const ModelParams& params);

/// Normalises sigma by sigma_bar and pressure by nu, yielding the linear pair in unit units.
[[nodiscard]] NormalizedModel canonical_model(const ModelParams& params);

/// Strict parse of {"lambda", "mu", "sigma_c", "sigma_bar", "nu", "gamma"}; unknown keys are rejected.
[[nodiscard]] ModelParams model_params_from_json(const nlohmann::json& j);
[[nodiscard]] nlohmann::json to_json(const ModelParams& params);

struct AssumptionCheck {
  std::string assumption;  // "A1", "A2" or "A3"
  std::string description;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<AssumptionCheck> checks;

  [[nodiscard]] bool passed() const;
  /// Human-readable list of failed checks, e.g. "(A3) sigma_c < 1: sigma_c = 1.2".
  [[nodiscard]] std::vector<std::string> failures() const;
};

/// Samples (A1)-(A3) on 1001 uniform points of [0, sigma_max].
[[nodiscard]] ValidationReport validate_assumptions(const ModelFunctions& fns, double sigma_max = 1.0);

}  // namespace tumorstab
