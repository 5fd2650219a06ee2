#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "support.hpp"
#include "tumorstab/cli.hpp"
#include "tumorstab/errors.hpp"

using namespace tumorstab;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("tumorstab_cli_test_" + name);
  fs::remove_all(dir);
  return dir;
}

RunConfig canonical_config(const std::string& name) {
  RunConfig cfg;
  cfg.model = testsupport::canonical_params();
  cfg.model.gamma = 0.05;
  cfg.output_dir = scratch(name);
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("threshold command") {
  auto cfg = canonical_config("threshold");
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(run(Command::threshold, cfg, out, err) == kExitOk);
  const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "threshold.json"));
  CHECK(j["gamma_star"].get<double>() > 0.0);
  CHECK(j["l_star"].get<int>() >= 2);
  CHECK(j["certificate"]["satisfied"].get<bool>());
  CHECK(out.str().rfind("gamma_star=", 0) == 0);
  CHECK(out.str().find("l_star=") != std::string::npos);
  CHECK(out.str().find("stable=") != std::string::npos);
}

TEST_CASE("assumption violation exits with 2 and names A3") {
  auto cfg = canonical_config("bad");
  cfg.model.sigma_c = 1.5;
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(Command::threshold, cfg, out, err) == kExitValidation);
  CHECK(err.str().find("(A3)") != std::string::npos);
}

TEST_CASE("config schema is strict") {
  const auto j = nlohmann::json::parse(slurp(fs::path(TUMORSTAB_TEST_DATA) / "canonical.json"));
  const auto cfg = run_config_from_json(j);
  CHECK(cfg.L_max == 64);
  CHECK(cfg.gamma_values.size() == 2);
  CHECK(cfg.eigenmode.l == 3);
  CHECK(cfg.evolve.l_min == 2);

  auto bad = j;
  bad["surprise"] = true;
  CHECK_THROWS_AS((void)run_config_from_json(bad), ValidationError);
  bad = j;
  bad["evolve"]["dt"] = 0.1;
  CHECK_THROWS_AS((void)run_config_from_json(bad), ValidationError);
  bad = j;
  bad["L_max"] = 1;
  CHECK_THROWS_AS((void)run_config_from_json(bad), ValidationError);
  CHECK_THROWS_AS((void)parse_command("explode"), ValidationError);
  CHECK(parse_command("compare-darcy") == Command::compare_darcy);
}

TEST_CASE("compare-darcy rows are ordered") {
  auto cfg = canonical_config("darcy");
  std::ostringstream out;
  std::ostringstream err;
  REQUIRE(run(Command::compare_darcy, cfg, out, err) == kExitOk);
  std::istringstream is(slurp(cfg.output_dir / "darcy.csv"));
  std::string line;
  std::getline(is, line);
  CHECK(line == "l,gamma_l,gamma_tilde_l");
  int rows = 0;
  while (std::getline(is, line)) {
    std::istringstream row(line);
    std::string l, g, gt;
    std::getline(row, l, ',');
    std::getline(row, g, ',');
    std::getline(row, gt, ',');
    CHECK(std::stod(gt) < std::stod(g));
    ++rows;
  }
  CHECK(rows == 63);
}

TEST_CASE("spectrum needs surface tensions and is thread-count independent") {
  auto cfg = canonical_config("spectrum");
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(Command::spectrum, cfg, out, err) == kExitValidation);

  cfg.gamma_values = {0.02, 0.08};
  REQUIRE(run(Command::spectrum, cfg, out, err) == kExitOk);
  const auto first = slurp(cfg.output_dir / "spectrum_g0.csv");
  const auto j = nlohmann::json::parse(slurp(cfg.output_dir / "spectrum_g1.json"));
  CHECK(j["stable"].get<bool>());
  CHECK(j.contains("alpha_0"));

  cfg.threads = 3;
  REQUIRE(run(Command::spectrum, cfg, out, err) == kExitOk);
  CHECK(slurp(cfg.output_dir / "spectrum_g0.csv") == first);
  CHECK(first.rfind("l,gamma_l,alpha_l,gamma_tilde_l,multiplicity\n", 0) == 0);
}

TEST_CASE("eigenmode, evolve, stationary and modes artifacts") {
  auto cfg = canonical_config("artifacts");
  cfg.gamma_values = {0.0725};
  std::ostringstream out;
  std::ostringstream err;
  CHECK(run(Command::eigenmode, cfg, out, err) == kExitOk);
  CHECK(fs::exists(cfg.output_dir / "eigenmode_g0.json"));
  CHECK(fs::exists(cfg.output_dir / "eigenmode_g0.csv"));
  CHECK(run(Command::evolve, cfg, out, err) == kExitOk);
  CHECK(fs::exists(cfg.output_dir / "trajectory_g0.csv"));
  CHECK(fs::exists(cfg.output_dir / "snapshot_g0_start.csv"));
  CHECK(run(Command::stationary, cfg, out, err) == kExitOk);
  CHECK(fs::exists(cfg.output_dir / "stationary_profile.csv"));
  CHECK(run(Command::modes, cfg, out, err) == kExitOk);
  CHECK(fs::exists(cfg.output_dir / "modes.csv"));

  cfg.eigenmode.l = 1;
  CHECK(run(Command::eigenmode, cfg, out, err) == kExitValidation);
  CHECK(err.str().find("translation") != std::string::npos);
}
