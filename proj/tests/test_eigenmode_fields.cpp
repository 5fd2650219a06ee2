#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <string>

#include "support.hpp"
#include "tumorstab/eigenmode_fields.hpp"
#include "tumorstab/errors.hpp"
#include "tumorstab/spectrum.hpp"

using namespace tumorstab;

namespace {

template <typename F>
double simpson(F f, double a, double b, int n = 10000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * f(a + k * h);
  return s * h / 3.0;
}

const SpectrumReport& report() {
  static const SpectrumReport rep = [] {
    const auto& c = testsupport::canonical_case();
    return compute_spectrum(c.unit.state, c.unit.functions);
  }();
  return rep;
}

}  // namespace

TEST_CASE("boundary data against a brute-force oracle, lambda = 1, l = 2") {
  const auto& c = testsupport::canonical_case();
  const int l = 2;
  const double s1 = std::sqrt(3.0 / 5.0);
  const double s2 = std::sqrt(2.0 / 5.0);
  const double sp = testsupport::sigma_prime_exact_at_1(1.0);
  const double il1 = testsupport::bessel_series_oracle(l, 1.0);
  auto F = [&](double r) { return -sp * testsupport::bessel_series_oracle(l, r) / il1; };
  auto Fp = [&](double r) {
    // i_l' = i_{l+1} + (l / x) i_l
    const double d = testsupport::bessel_series_oracle(l + 1, r) + l / r * testsupport::bessel_series_oracle(l, r);
    return -sp * d / il1;
  };
  // g' = 1 and g'' = 0 for the canonical law, so G = F and G' = F'.
  auto F1 = [&](double r) { return r == 0.0 ? 0.0 : s1 * (-Fp(r) + l * F(r) / r); };
  auto F2 = [&](double r) { return s2 * (Fp(r) + (l + 1.0) * F(r) / r); };
  const double Jv = simpson([&](double s) { return std::pow(s, l + 3) * F1(s); }, 0.0, 1.0);
  const double moment = simpson([&](double s) { return F(s) * std::pow(s, l + 2); }, 0.0, 1.0);

  const double v1 = (s1 * F(1.0) + Jv) / (2.0 * l + 3.0);
  const double w1 = s2 * F(1.0) / (2.0 * l - 1.0);
  const double vp1 = (s1 * (F(1.0) + Fp(1.0)) - (l + 2.0) * Jv + F1(1.0)) / (2.0 * l + 3.0);
  const double wp1 = (s2 * (F(1.0) + Fp(1.0)) - F2(1.0)) / (2.0 * l - 1.0);

  const auto mode = solve_mode(l, c.unit.state, c.unit.functions);
  const auto bd = boundary_data(l, mode, c.unit.state, c.unit.functions);
  CHECK(std::abs(bd.v_tilde - v1) < 1e-8);
  CHECK(std::abs(bd.w_tilde - w1) < 1e-8);
  CHECK(std::abs(bd.v_tilde_prime - vp1) < 1e-8);
  CHECK(std::abs(bd.w_tilde_prime - wp1) < 1e-8);
  CHECK(std::abs(bd.v_tilde - s1 * moment) < 1e-8);
}

TEST_CASE("boundary data identities") {
  const auto& c = testsupport::canonical_case();
  const double gs = c.unit.functions.g_prime(1.0) * c.unit.state.sigma_s_prime_at_R;
  for (int l : {2, 3, 7, 12}) {
    const auto mode = solve_mode(l, c.unit.state, c.unit.functions);
    const auto bd = boundary_data(l, mode, c.unit.state, c.unit.functions);
    CHECK(bd.w_tilde_prime / bd.w_tilde == doctest::Approx(-l).epsilon(1e-14));
    const double s1 = std::sqrt((l + 1.0) / (2.0 * l + 1.0));
    CHECK(std::abs(bd.v_tilde_prime + (l + 2.0) * bd.v_tilde + s1 * gs) < 1e-8);
  }
}

TEST_CASE("constants: combination, affine slope and vanishing rigid parts") {
  const auto& c = testsupport::canonical_case();
  for (int l : {2, 4, 9}) {
    const auto mode = solve_mode(l, c.unit.state, c.unit.functions);
    const auto bd = boundary_data(l, mode, c.unit.state, c.unit.functions);
    const double g0 = 0.05;
    const double h = 0.01;
    const auto k0 = solve_constants(l, g0, bd, c.unit.functions, c.unit.state);
    CHECK(k0.combination_gap < 1e-9);
    CHECK(k0.B1 == 0.0);
    CHECK(k0.a_vec.isZero(0.0));
    const auto kp = solve_constants(l, g0 + h, bd, c.unit.functions, c.unit.state);
    const auto km = solve_constants(l, g0 - h, bd, c.unit.functions, c.unit.state);
    const double slope = ((kp.A1 + kp.C1_tilde) - (km.A1 + km.C1_tilde)) / (2.0 * h);
    const double ld = l;
    const double expected = -(2.0 * ld * ld + 5.0 * ld + 2.0) / (4.0 * (2.0 * ld * ld + 4.0 * ld + 3.0));
    CHECK(std::abs(slope - expected) < 1e-10);
  }
}

TEST_CASE("degree one is the translation mode") {
  const auto& c = testsupport::canonical_case();
  const auto mode = solve_mode(1, c.unit.state, c.unit.functions);
  try {
    (void)boundary_data(1, mode, c.unit.state, c.unit.functions);
    FAIL("expected a degree error");
  } catch (const DegreeError& e) {
    CHECK(std::string(e.what()).find("translation") != std::string::npos);
  }
  CHECK_THROWS_AS(require_field_degree(0), DegreeError);
}

TEST_CASE("assembled fields") {
  const auto& c = testsupport::canonical_case();
  const int l = 3;
  const double gamma = 0.5 * report().gamma_star;
  const auto mode = solve_mode(l, c.unit.state, c.unit.functions);
  const auto f = assemble_fields(l, -2, gamma, mode, c.unit.state, c.unit.functions);
  CHECK(f.v(0.0) == 0.0);
  CHECK(f.w(0.0) == 0.0);
  CHECK(f.x(0.0) == 0.0);
  CHECK(f.P(1.0) == doctest::Approx(2.0 * (2 * l + 3) * f.constants().A1));
  CHECK(f.psi(1.0) == doctest::Approx(f.psi_boundary()).epsilon(1e-11));
  const double gs = c.unit.functions.g_prime(1.0) * c.unit.state.sigma_s_prime_at_R;
  CHECK(f.psi_boundary() == doctest::Approx(-4.0 / 3.0 * gs + 2.0 * (2 * l + 3) * f.constants().A1));
  for (double r : {0.2, 0.5, 0.9}) {
    const double h = 1e-5;
    CHECK(f.v_prime(r) == doctest::Approx((f.v(r + h) - f.v(r - h)) / (2 * h)).epsilon(1e-6));
    CHECK(f.w_prime(r) == doctest::Approx((f.w(r + h) - f.w(r - h)) / (2 * h)).epsilon(1e-6));
    CHECK(f.P(r) / std::pow(r, l) == doctest::Approx(f.P(1.0)));
  }
  CHECK(f.v_tilde(1.0) == doctest::Approx(f.boundary().v_tilde).epsilon(1e-10));
  CHECK(f.w_tilde(1.0) == doctest::Approx(f.boundary().w_tilde).epsilon(1e-10));
  CHECK(f.v_tilde_prime(1.0) == doctest::Approx(f.boundary().v_tilde_prime).epsilon(1e-9));
  CHECK(f.w_tilde_prime(1.0) == doctest::Approx(f.boundary().w_tilde_prime).epsilon(1e-9));
}

TEST_CASE("residuals and multiplier cross-check") {
  const auto& c = testsupport::canonical_case();
  const auto& rep = report();
  for (int l : {2, 5}) {
    const auto mode = solve_mode(l, c.unit.state, c.unit.functions);
    for (double gamma : {0.5 * rep.gamma_star, 2.0 * rep.gamma_star}) {
      const auto f = assemble_fields(l, 0, gamma, mode, c.unit.state, c.unit.functions);
      const auto r = residual_report(f, rep.alpha(l, gamma));
      CHECK(r.max_field_residual() < 1e-6);
      CHECK(r.pressure_log_slope < 1e-8);
      CHECK(r.multiplier_cross_check < 1e-8);
      CHECK(r.multiplier_field_check < 1e-8);
      CHECK(r.passed());
    }
  }
}

TEST_CASE("json and csv dumps") {
  const auto& c = testsupport::canonical_case();
  const auto mode = solve_mode(2, c.unit.state, c.unit.functions);
  const auto f = assemble_fields(2, 1, 0.03, mode, c.unit.state, c.unit.functions);
  const auto r = residual_report(f, report().alpha(2, 0.03));
  const auto j = to_json(f, r);
  for (const char* key : {"l", "m", "gamma", "A1", "C1_tilde", "B1", "residuals"}) CHECK(j.contains(key));
  CHECK(j["residuals"].contains("divergence"));
  std::ostringstream os;
  write_fields_csv(os, f);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  CHECK(line == "r,P_lm,v_lm,w_lm,x_lm,H_l1,H_l2");
  int rows = 0;
  while (std::getline(is, line)) ++rows;
  CHECK(rows == 257);
}
