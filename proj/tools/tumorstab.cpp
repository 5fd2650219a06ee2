// Command-line front end: tumorstab <command> [--config file] [--out dir] [--l-max n] [--gamma g]... [--seed s]

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "tumorstab/cli.hpp"
#include "tumorstab/errors.hpp"

int main(int argc, char** argv) {
  using namespace tumorstab;

  CLI::App app{"Stationary solution, spectrum and stability threshold of a Stokes free-boundary tumor model"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::optional<int> l_max;
  std::vector<double> gammas;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;

  for (const auto& name : command_names()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "JSON run configuration");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--l-max", l_max, "truncation degree");
    sub->add_option("--gamma", gammas, "surface tension in model units (repeatable)")->take_all()->allow_extra_args(false);
    sub->add_option("--seed", seed, "seed for the random initial state of evolve");
    sub->add_option("--threads", threads, "worker threads for the per-degree solves");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  const auto* sub = app.get_subcommands().front();
  RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_run_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (l_max) cfg.L_max = *l_max;
    if (!gammas.empty()) cfg.gamma_values = gammas;
    if (seed) cfg.evolve.seed = *seed;
    if (threads) cfg.threads = *threads;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  }

  try {
    return run(parse_command(sub->get_name()), cfg, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
