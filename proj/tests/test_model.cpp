#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "support.hpp"
#include "tumorstab/errors.hpp"
#include "tumorstab/model.hpp"

using namespace tumorstab;

namespace {

std::string validation_message(const ModelParams& p) {
  try {
    validate_params(p);
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

}  // namespace

TEST_CASE("parameter validation names the violated assumption") {
  auto p = testsupport::canonical_params();
  CHECK(validation_message(p).empty());

  p.sigma_c = 1.5;
  CHECK(validation_message(p).find("(A3)") != std::string::npos);

  p = testsupport::canonical_params();
  p.lambda = -1.0;
  CHECK(validation_message(p).find("(A1)") != std::string::npos);

  p = testsupport::canonical_params();
  p.mu = 0.0;
  CHECK(validation_message(p).find("(A2)") != std::string::npos);

  p = testsupport::canonical_params();
  p.sigma_c = 0.0;
  CHECK(validation_message(p).find("(A2)") != std::string::npos);
}

TEST_CASE("normalisation by sigma_bar and nu") {
  ModelParams p;
  p.lambda = 2.0;
  p.mu = 3.0;
  p.sigma_c = 1.0;
  p.sigma_bar = 2.0;
  p.nu = 4.0;
  p.gamma = 8.0;
  const auto m = canonical_model(p);
  CHECK(m.functions.sigma_c == doctest::Approx(0.5));
  CHECK(m.gamma == doctest::Approx(2.0));
  // g_norm(s) = g(sigma_bar s) = mu (sigma_bar s - sigma_c)
  CHECK(m.functions.g(0.8) == doctest::Approx(3.0 * (2.0 * 0.8 - 1.0)));
  CHECK(m.functions.g_prime(0.3) == doctest::Approx(6.0));
  CHECK(m.functions.f(0.8) == doctest::Approx(1.6));
  CHECK(m.functions.f_prime(0.8) == doctest::Approx(2.0));
}

TEST_CASE("json parsing is strict") {
  const auto p = testsupport::canonical_params(0.25, 2.0);
  const auto back = model_params_from_json(to_json(p));
  CHECK(back.lambda == p.lambda);
  CHECK(back.mu == p.mu);
  CHECK(back.sigma_c == p.sigma_c);

  auto j = to_json(p);
  j["extra"] = 1.0;
  CHECK_THROWS_AS((void)model_params_from_json(j), ValidationError);
  j = to_json(p);
  j.erase("nu");
  CHECK_THROWS_AS((void)model_params_from_json(j), ValidationError);
  j = to_json(p);
  j["mu"] = "fast";
  CHECK_THROWS_AS((void)model_params_from_json(j), ValidationError);
}

TEST_CASE("assumption checks on user supplied laws") {
  const auto canon = canonical_model(testsupport::canonical_params()).functions;
  CHECK(validate_assumptions(canon).passed());

  auto bad_f = canon;
  bad_f.f_prime = [](double s) { return 0.5 - s; };
  auto rep = validate_assumptions(bad_f);
  CHECK_FALSE(rep.passed());
  REQUIRE(rep.failures().size() == 1);
  CHECK(rep.failures()[0].rfind("(A1)", 0) == 0);

  auto bad_g = canon;
  bad_g.g_prime = [](double) { return 0.0; };
  rep = validate_assumptions(bad_g);
  REQUIRE(rep.failures().size() == 1);
  CHECK(rep.failures()[0].rfind("(A2)", 0) == 0);

  auto bad_c = canon;
  bad_c.sigma_c = 1.2;
  bad_c.g = [](double s) { return s - 1.2; };
  rep = validate_assumptions(bad_c);
  bool saw_a3 = false;
  for (const auto& f : rep.failures()) saw_a3 = saw_a3 || f.rfind("(A3)", 0) == 0;
  CHECK(saw_a3);
}

TEST_CASE("scaling and second-derivative fallback") {
  ModelFunctions fns;
  fns.f = [](double s) { return s * s; };
  fns.f_prime = [](double s) { return 2.0 * s; };
  fns.g = [](double s) { return s * s * s; };
  fns.g_prime = [](double s) { return 3.0 * s * s; };
  CHECK(fns.g_second_at(0.7) == doctest::Approx(4.2).epsilon(1e-8));
  const auto sc = fns.scaled(4.0);
  CHECK(sc.g(0.5) == doctest::Approx(0.5));
  CHECK(sc.f_prime(0.5) == doctest::Approx(4.0));
  CHECK(sc.g_second_at(0.7) == doctest::Approx(16.8).epsilon(1e-8));
}
