#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "tumorstab/model.hpp"
#include "tumorstab/kernels/tolerance.hpp"

namespace tumorstab {

struct EigenmodeConfig {
  int l = 2;
  int m = 0;
};

struct EvolveConfig {
  int L_max = 16;
  std::optional<double> T;  // default 200 / |dominant l >= 2 multiplier|
  int samples = 201;
  double epsilon = 0.05;
  std::uint64_t seed = 1;
  int l_min = 0;  // degrees below this start at zero
};

/// Surface tensions in gamma_values are in model units; they are mapped to the unit ball as R_s gamma / nu.
struct RunConfig {
  ModelParams model;
  int L_max = 64;
  std::vector<double> gamma_values;
  Tolerance ode{1e-12, 1e-14};
  Tolerance quadrature{1e-12, 1e-11};
  std::filesystem::path output_dir = "out";
  EigenmodeConfig eigenmode;
  EvolveConfig evolve;
  unsigned threads = 1;

  /// Throws ValidationError when L_max < 2 or a section is out of range.
  void validate() const;
};

/// Strict schema: unknown keys anywhere raise ValidationError.
[[nodiscard]] RunConfig run_config_from_json(const nlohmann::json& j);
[[nodiscard]] RunConfig load_run_config(const std::filesystem::path& path);

enum class Command { stationary, modes, spectrum, threshold, eigenmode, evolve, compare_darcy };

[[nodiscard]] Command parse_command(const std::string& name);
[[nodiscard]] std::string to_string(Command c);
[[nodiscard]] const std::vector<std::string>& command_names();

/// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNumerical = 3;

/// Runs one command, writes its artifacts under config.output_dir and a one-line summary per result to `out`.
/// Errors are reported on `err` and mapped to the exit codes above.
int run(Command command, const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace tumorstab
