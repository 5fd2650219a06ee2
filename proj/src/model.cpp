#include "tumorstab/model.hpp"

#include <cmath>
#include <set>
#include <sstream>

#include "tumorstab/errors.hpp"

namespace tumorstab {

namespace {

constexpr int kAssumptionSamples = 1001;
constexpr double kPositivityFloor = 1e-14;

std::string fmt(double x) {
  std::ostringstream os;
  os.precision(10);
  os << x;
  return os.str();
}

}  // namespace

double ModelFunctions::g_second_at(double s) const {
  if (g_second) return g_second(s);
  const double h = 1e-5 * std::max(1.0, std::abs(s));
  return (g_prime(s + h) - g_prime(s - h)) / (2.0 * h);
}

ModelFunctions ModelFunctions::scaled(double factor) const {
  ModelFunctions out;
  auto scale = [factor](const ScalarLaw& law) -> ScalarLaw {
    if (!law) return {};
    return [law, factor](double s) { return factor * law(s); };
  };
  out.f = scale(f);
  out.f_prime = scale(f_prime);
  out.g = scale(g);
  out.g_prime = scale(g_prime);
  out.g_second = scale(g_second);
  out.sigma_c = sigma_c;
  return out;
}

void validate_params(const ModelParams& p) {
  std::vector<std::string> problems;
  auto finite = [](double x) { return std::isfinite(x); };
  if (!finite(p.lambda) || !(p.lambda > 0.0)) {
    problems.push_back("(A1) f'(sigma) = lambda must be positive: lambda = " + fmt(p.lambda));
  }
  if (!finite(p.mu) || !(p.mu > 0.0)) {
    problems.push_back("(A2) g'(sigma) = mu must be positive: mu = " + fmt(p.mu));
  }
  if (!finite(p.sigma_c) || !(p.sigma_c > 0.0)) {
    problems.push_back("(A2) g must vanish at some sigma_c > 0: sigma_c = " + fmt(p.sigma_c));
  }
  if (!finite(p.sigma_bar) || !(p.sigma_bar > 0.0)) {
    problems.push_back("sigma_bar must be positive: sigma_bar = " + fmt(p.sigma_bar));
  } else if (finite(p.sigma_c) && !(p.sigma_c < p.sigma_bar)) {
    problems.push_back("(A3) sigma_c < sigma_bar required: sigma_c = " + fmt(p.sigma_c) +
                       ", sigma_bar = " + fmt(p.sigma_bar));
  }
  if (!finite(p.nu) || !(p.nu > 0.0)) problems.push_back("nu must be positive: nu = " + fmt(p.nu));
  if (!finite(p.gamma) || !(p.gamma >= 0.0)) problems.push_back("gamma must be >= 0: gamma = " + fmt(p.gamma));
  if (!problems.empty()) {
    std::string msg = "invalid model parameters:";
    for (const auto& s : problems) msg += "\n  " + s;
    throw ValidationError(msg);
  }
}

NormalizedModel canonical_model(const ModelParams& p) {
  validate_params(p);
  // sigma -> sigma / sigma_bar keeps f linear with the same rate and turns
  // g(sigma_bar s) = mu sigma_bar (s - sigma_c / sigma_bar); p -> p / nu leaves g alone.
  const double lambda = p.lambda;
  const double mu = p.mu * p.sigma_bar;
  const double sc = p.sigma_c / p.sigma_bar;
  NormalizedModel out;
  out.functions.f = [lambda](double s) { return lambda * s; };
  out.functions.f_prime = [lambda](double) { return lambda; };
  out.functions.g = [mu, sc](double s) { return mu * (s - sc); };
  out.functions.g_prime = [mu](double) { return mu; };
  out.functions.g_second = [](double) { return 0.0; };
  out.functions.sigma_c = sc;
  out.gamma = p.gamma / p.nu;
  return out;
}

ModelParams model_params_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ValidationError("model: expected a JSON object");
  static const std::set<std::string> keys = {"lambda", "mu", "sigma_c", "sigma_bar", "nu", "gamma"};
  for (const auto& [key, value] : j.items()) {
    if (!keys.contains(key)) throw ValidationError("model: unknown key '" + key + "'");
  }
  auto number = [&](const char* key) {
    if (!j.contains(key)) throw ValidationError(std::string("model: missing required key '") + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw ValidationError(std::string("model: key '") + key + "' must be a number");
    return v.get<double>();
  };
  ModelParams p;
  p.lambda = number("lambda");
  p.mu = number("mu");
  p.sigma_c = number("sigma_c");
  p.sigma_bar = number("sigma_bar");
  p.nu = number("nu");
  p.gamma = number("gamma");
  return p;
}

nlohmann::json to_json(const ModelParams& p) {
  return {{"lambda", p.lambda}, {"mu", p.mu},   {"sigma_c", p.sigma_c},
          {"sigma_bar", p.sigma_bar}, {"nu", p.nu}, {"gamma", p.gamma}};
}

bool ValidationReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

std::vector<std::string> ValidationReport::failures() const {
  std::vector<std::string> out;
  for (const auto& c : checks) {
    if (!c.passed) out.push_back("(" + c.assumption + ") " + c.description + ": " + c.detail);
  }
  return out;
}

ValidationReport validate_assumptions(const ModelFunctions& fns, double sigma_max) {
  if (!(sigma_max >= 1.0)) throw ValidationError("validate_assumptions: sigma_max must be >= 1");
  ValidationReport report;

  const double f0 = fns.f(0.0);
  report.checks.push_back({"A1", "f(0) = 0", std::abs(f0) < 1e-12, "f(0) = " + fmt(f0)});

  auto positive_on_grid = [&](const ScalarLaw& law, const char* name) {
    for (int k = 0; k < kAssumptionSamples; ++k) {
      const double s = sigma_max * k / (kAssumptionSamples - 1);
      const double v = law(s);
      if (!(v > kPositivityFloor)) {
        return std::pair{false, std::string(name) + "(" + fmt(s) + ") = " + fmt(v)};
      }
    }
    return std::pair{true, std::string(name) + " > 0 on [0, " + fmt(sigma_max) + "]"};
  };
  const auto [fp_ok, fp_detail] = positive_on_grid(fns.f_prime, "f'");
  report.checks.push_back({"A1", "f' > 0", fp_ok, fp_detail});
  const auto [gp_ok, gp_detail] = positive_on_grid(fns.g_prime, "g'");
  report.checks.push_back({"A2", "g' > 0", gp_ok, gp_detail});

  const double gc = fns.g(fns.sigma_c);
  report.checks.push_back({"A2", "g(sigma_c) = 0 with sigma_c > 0", fns.sigma_c > 0.0 && std::abs(gc) < 1e-10,
                           "sigma_c = " + fmt(fns.sigma_c) + ", g(sigma_c) = " + fmt(gc)});
  report.checks.push_back({"A3", "sigma_c < 1", fns.sigma_c < 1.0, "sigma_c = " + fmt(fns.sigma_c)});
  return report;
}

}  // namespace tumorstab
