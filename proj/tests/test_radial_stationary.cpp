#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "support.hpp"
#include "tumorstab/errors.hpp"
#include "tumorstab/radial_stationary.hpp"

using namespace tumorstab;

namespace {

// v_s for g = mu (s - sigma_c) and the closed-form nutrient on the unit ball.
double velocity_exact(double lambda, double mu, double sigma_c, double r) {
  const double k = std::sqrt(lambda);
  if (r < 1e-3) return mu * r * (k / std::sinh(k) - sigma_c) / 3.0;
  const double prim = (r * std::cosh(k * r) / k - std::sinh(k * r) / (k * k)) / std::sinh(k);
  return mu * (prim - sigma_c * r * r * r / 3.0) / (r * r);
}

}  // namespace

TEST_CASE("closed-form nutrient profile on the unit ball") {
  for (double lambda : {0.25, 1.0, 4.0}) {
    const auto p = testsupport::canonical_params(lambda);
    const auto m = canonical_model(p);
    const auto st = find_stationary(m.functions, m.gamma);
    CHECK(st.R_s == doctest::Approx(1.0).epsilon(1e-10));
    double worst = 0.0;
    double worst_v = 0.0;
    for (std::size_t k = 0; k < st.grid.size(); ++k) {
      const double r = st.grid.nodes[k] / st.R_s;
      const double ref = testsupport::sigma_exact(lambda, r);
      worst = std::max(worst, std::abs(st.sigma_s[k] - ref) / ref);
      worst_v = std::max(worst_v, std::abs(st.v_s[k] - velocity_exact(lambda, p.mu, p.sigma_c, r)));
    }
    CHECK(worst < 1e-8);
    CHECK(worst_v < 1e-8);
    CHECK(st.sigma_s_prime_at_R == doctest::Approx(testsupport::sigma_prime_exact_at_1(lambda)).epsilon(1e-8));
  }
}

TEST_CASE("invariants and pressure relation") {
  const auto m = canonical_model(testsupport::canonical_params());
  const auto st = find_stationary(m.functions, 0.7);
  CHECK(stationary_violations(st, m.functions).empty());
  for (std::size_t k = 0; k < st.grid.size(); k += 64) {
    CHECK(st.p_s[k] == doctest::Approx(0.7 / st.R_s + 4.0 / 3.0 * m.functions.g(st.sigma_s[k])).epsilon(1e-12));
  }
  CHECK(st.sigma(0.5) == doctest::Approx(testsupport::sigma_exact(1.0, 0.5)).epsilon(1e-10));
}

TEST_CASE("mass balance sign pattern") {
  const auto m = canonical_model(testsupport::canonical_params());
  CHECK(mass_balance_residual(m.functions, 0.3) > 0.0);
  CHECK(mass_balance_residual(m.functions, 0.5) > 0.0);
  CHECK(mass_balance_residual(m.functions, 3.0) < 0.0);
  CHECK(std::abs(mass_balance_residual(m.functions, 1.0)) < 1e-12);
}

TEST_CASE("lower sigma_c gives a larger tumor") {
  double previous = 0.0;
  for (double sc : {0.9, 0.7, 0.5, 0.3}) {
    auto p = testsupport::canonical_params();
    p.sigma_c = sc;
    const auto m = canonical_model(p);
    const auto st = find_stationary(m.functions, m.gamma);
    CHECK(st.R_s > previous);
    previous = st.R_s;
  }
}

TEST_CASE("rescaling to the unit ball") {
  auto p = testsupport::canonical_params();
  p.sigma_c = 0.5;
  p.gamma = 2.0;
  const auto m = canonical_model(p);
  const auto st = find_stationary(m.functions, m.gamma);
  REQUIRE(st.R_s > 1.5);
  const auto u = rescale_to_unit(st, m.functions);
  CHECK(u.state.R_s == 1.0);
  CHECK(u.state.gamma == doctest::Approx(2.0 * st.R_s));
  CHECK(u.state.sigma(0.5) == doctest::Approx(st.sigma(0.5 * st.R_s)).epsilon(1e-12));
  CHECK(u.state.sigma_s_prime_at_R == doctest::Approx(st.R_s * st.sigma_s_prime_at_R).epsilon(1e-12));
  CHECK(u.functions.g(0.8) == doctest::Approx(st.R_s * st.R_s * m.functions.g(0.8)));
  CHECK(stationary_violations(u.state, u.functions).empty());
}

TEST_CASE("no stationary radius within the cap") {
  auto p = testsupport::canonical_params();
  p.sigma_c = 1e-5;
  const auto m = canonical_model(p);
  CHECK_THROWS_AS((void)find_stationary(m.functions, 1.0), BracketError);
}

TEST_CASE("profile csv export") {
  const auto m = canonical_model(testsupport::canonical_params());
  const auto st = find_stationary(m.functions, 1.0);
  std::ostringstream os;
  write_profile_csv(os, st);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "r,sigma_s,v_s,p_s");
  std::size_t rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == st.grid.size());
}
