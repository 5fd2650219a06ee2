// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tumorstab/dynamics.hpp"
#include "tumorstab/eigenmode_fields.hpp"
#include "tumorstab/kernels/roots.hpp"
#include "tumorstab/spectrum.hpp"

using namespace tumorstab;

namespace {

struct Outcome {
  bool passed = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      detail << " [failed: " << what << "]";
    }
  }
};

const testsupport::UnitCase& canon() { return testsupport::canonical_case(); }

const SpectrumReport& canon_spectrum() {
  static const SpectrumReport rep = compute_spectrum(canon().unit.state, canon().unit.functions);
  return rep;
}

void stationary_oracle(Outcome& o) {
  const auto m = canonical_model(testsupport::canonical_params());
  const auto st = find_stationary(m.functions, m.gamma);
  double worst = 0.0;
  for (std::size_t k = 0; k < st.grid.size(); ++k) {
    const double ref = testsupport::sigma_exact(1.0, st.grid.nodes[k] / st.R_s);
    worst = std::max(worst, std::abs(st.sigma_s[k] - ref) / ref);
  }
  o.require(worst < 1e-8, "sigma relative error");

  // sigma_c that yields R_s = 1, found by root finding on the radius
  auto radius_gap = [](double sc) {
    auto p = testsupport::canonical_params();
    p.sigma_c = sc;
    const auto mm = canonical_model(p);
    return find_stationary(mm.functions, mm.gamma).R_s - 1.0;
  };
  const double sc = find_root(radius_gap, 0.8, 0.99, Tolerance{1e-13, 1e-14});
  const double closed = 3.0 * (1.0 / std::tanh(1.0) - 1.0);
  o.require(std::abs(sc - closed) < 1e-6, "sigma_c relation");
  o.detail << "max rel err " << worst << ", |sigma_c - 3(coth 1 - 1)| = " << std::abs(sc - closed);
}

void mode_oracle(Outcome& o) {
  double worst = 0.0;
  for (double lambda : {0.25, 1.0, 4.0}) {
    const auto c = testsupport::unit_case(lambda);
    const double k = std::sqrt(lambda);
    const double sp = c.unit.state.sigma_s_prime_at_R;
    for (int l : {0, 2, 5, 10}) {
      const auto mode = solve_mode(l, c.unit.state, c.unit.functions);
      const double il1 = testsupport::bessel_series_oracle(l, k);
      for (std::size_t i = 1; i < mode.nodes.size(); ++i) {
        const double ref = -sp * testsupport::bessel_series_oracle(l, k * mode.nodes[i]) / il1;
        worst = std::max(worst, std::abs(mode.F[i] - ref) / std::abs(ref));
      }
    }
  }
  o.require(worst < 1e-8, "F_l relative error");
  o.detail << "max rel err " << worst;
}

void threshold_properties(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  SpectrumOptions opt;
  opt.L_max = 64;
  opt.require_certificate = false;
  const auto& fns = canon().unit.functions;
  const auto rep = compute_spectrum(canon().unit.state, fns, opt);
  o.require(rep.alpha_0 < 0.0, "alpha_0 < 0");
  bool positive = true;
  double max_gamma = 0.0;
  for (int l = 2; l <= 64; ++l) {
    positive = positive && rep.gamma_l[static_cast<std::size_t>(l)] > 0.0;
    max_gamma = std::max(max_gamma, rep.gamma_l[static_cast<std::size_t>(l)]);
  }
  o.require(positive, "gamma_l > 0");
  o.require(rep.gamma_l[64] < max_gamma, "gamma_64 < max");
  const double g200 = gamma_threshold_l(solve_mode(200, canon().unit.state, fns), fns);
  const double g201 = gamma_threshold_l(solve_mode(201, canon().unit.state, fns), fns);
  const double ratio = (g201 - g200) * 200.0 * 200.0 / (-4.0 * fns.g(1.0));
  o.require(std::abs(ratio - 1.0) < 0.1, "tail ratio");
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(secs < 60.0, "runtime");
  o.detail << "alpha_0 " << rep.alpha_0 << ", tail ratio " << ratio << ", " << secs << " s";
}

void darcy_comparison(Outcome& o) {
  const auto& rep = canon_spectrum();
  bool ordered = true;
  for (int l = 2; l <= 64; ++l) {
    const auto li = static_cast<std::size_t>(l);
    ordered = ordered && rep.gamma_tilde_l[li] < rep.gamma_l[li];
  }
  o.require(ordered, "gamma_tilde_l < gamma_l");
  o.require(rep.gamma_tilde_star < rep.gamma_star, "gamma_tilde* < gamma*");
  o.detail << "gamma* " << rep.gamma_star << ", gamma_tilde* " << rep.gamma_tilde_star;
}

void truncation_robustness(Outcome& o) {
  SpectrumOptions a;
  a.L_max = 64;
  SpectrumOptions b;
  b.L_max = 128;
  const auto ra = compute_spectrum(canon().unit.state, canon().unit.functions, a);
  const auto rb = compute_spectrum(canon().unit.state, canon().unit.functions, b);
  const double gap = std::abs(ra.gamma_star - rb.gamma_star);
  o.require(gap < 1e-12, "gamma* stable under doubling");
  o.require(ra.certificate.satisfied && ra.certificate.decreasing_run >= 8, "certificate");
  o.detail << "|gamma*(64) - gamma*(128)| = " << gap << ", decreasing run " << ra.certificate.decreasing_run;
}

void eigenmode_residuals(Outcome& o) {
  const auto& rep = canon_spectrum();
  double worst = 0.0;
  double worst_alpha = 0.0;
  for (int l = 2; l <= 10; ++l) {
    const auto mode = solve_mode(l, canon().unit.state, canon().unit.functions);
    for (double gamma : {0.5 * rep.gamma_star, 2.0 * rep.gamma_star}) {
      const auto f = assemble_fields(l, 0, gamma, mode, canon().unit.state, canon().unit.functions);
      const auto r = residual_report(f, rep.alpha(l, gamma));
      worst = std::max({worst, r.divergence, r.traction_normal, r.traction_tangential, r.translation, r.rotation,
                        r.combination});
      worst_alpha = std::max(worst_alpha, r.multiplier_cross_check);
    }
  }
  o.require(worst < 1e-6, "field residuals");
  o.require(worst_alpha < 1e-8, "multiplier cross-check");
  o.detail << "max residual " << worst << ", multiplier gap " << worst_alpha;
}

void dynamics_suite(Outcome& o) {
  const auto& rep = canon_spectrum();
  const int L = 16;
  const auto s0 = random_state(L, 2024, 2);

  auto dominant = [&](double gamma, int lmin) {
    double a = -std::numeric_limits<double>::infinity();
    for (int l = lmin; l <= L; ++l) a = std::max(a, rep.alpha(l, gamma));
    return a;
  };
  const double gd = 2.0 * rep.gamma_star;
  const double ad = dominant(gd, 2);
  const double decay = late_rate(simulate(s0, rep, gd, 200.0 / std::abs(ad)));
  o.require(std::abs(decay - ad) <= 0.02 * std::abs(ad), "decay rate");

  const double gg = 0.5 * rep.gamma_star;
  const double ag = dominant(gg, 0);
  const double growth = late_rate(simulate(s0, rep, gg, 200.0 / std::abs(ag)));
  o.require(ag > 0.0 && std::abs(growth - ag) <= 0.02 * ag, "growth rate");

  auto one = PerturbationState::zeros(L);
  one.at(1, -1) = 0.4;
  one.at(1, 0) = -0.2;
  one.at(1, 1) = 1.3;
  o.require(evolve(one, rep, gg, 123.0).state.coeffs == one.coeffs, "l = 1 invariant");

  const double eps = std::numeric_limits<double>::epsilon();
  const auto u = random_state(L, 1);
  const auto w = random_state(L, 2);
  const auto split = evolve(evolve(u, rep, gg, 2.5).state, rep, gg, 4.0).state;
  const auto whole = evolve(u, rep, gg, 6.5).state;
  double semigroup = 0.0;
  for (Eigen::Index i = 0; i < u.coeffs.size(); ++i) {
    const double scale = std::max(std::abs(whole.coeffs[i]), std::numeric_limits<double>::min());
    semigroup = std::max(semigroup, std::abs(split.coeffs[i] - whole.coeffs[i]) / scale);
  }
  o.require(semigroup <= 8.0 * eps, "semigroup");

  auto mix = PerturbationState::zeros(L);
  mix.coeffs = 1.5 * u.coeffs + 0.25 * w.coeffs;
  const auto lhs = evolve(mix, rep, gd, 9.0).state;
  const auto eu = evolve(u, rep, gd, 9.0).state;
  const auto ew = evolve(w, rep, gd, 9.0).state;
  double superposition = 0.0;
  for (Eigen::Index i = 0; i < u.coeffs.size(); ++i) {
    const double scale = std::abs(1.5 * eu.coeffs[i]) + std::abs(0.25 * ew.coeffs[i]);
    if (scale > 0.0) {
      superposition =
          std::max(superposition, std::abs(lhs.coeffs[i] - (1.5 * eu.coeffs[i] + 0.25 * ew.coeffs[i])) / scale);
    }
  }
  o.require(superposition <= 8.0 * eps, "superposition");
  o.detail << "decay " << decay << " vs " << ad << ", growth " << growth << " vs " << ag << ", semigroup "
           << semigroup << ", superposition " << superposition;
}

void alpha_identities(Outcome& o) {
  const auto& rep = canon_spectrum();
  double zero = 0.0;
  double slope_err = 0.0;
  for (int l = 2; l <= 64; ++l) {
    const double gl = rep.gamma_l[static_cast<std::size_t>(l)];
    zero = std::max(zero, std::abs(rep.alpha(l, gl)));
    const double h = 0.25 * gl;
    const double fd = (rep.alpha(l, gl + h) - rep.alpha(l, gl - h)) / (2.0 * h);
    const double ld = l;
    const double exact = -ld * (ld + 2.0) * (2.0 * ld + 1.0) / (4.0 * (2.0 * ld * ld + 4.0 * ld + 3.0));
    slope_err = std::max(slope_err, std::abs(fd - exact) / std::abs(exact));
  }
  o.require(zero < 1e-10, "alpha_l(gamma_l) = 0");
  o.require(slope_err < 1e-12, "slope");
  o.detail << "max |alpha_l(gamma_l)| " << zero << ", slope rel err " << slope_err;
}

void mu_scaling(Outcome& o) {
  const auto c1 = testsupport::unit_case(1.0, 1.0);
  const auto c2 = testsupport::unit_case(1.0, 2.0);
  double worst = 0.0;
  for (int l = 2; l <= 64; ++l) {
    const double g1 = gamma_threshold_l(solve_mode(l, c1.unit.state, c1.unit.functions), c1.unit.functions);
    const double g2 = gamma_threshold_l(solve_mode(l, c2.unit.state, c2.unit.functions), c2.unit.functions);
    worst = std::max(worst, std::abs(g2 - 2.0 * g1) / std::abs(2.0 * g1));
  }
  o.require(worst < 1e-10, "gamma_l(2 mu) = 2 gamma_l(mu)");
  o.detail << "max rel deviation " << worst;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
      {"1 stationary oracle", stationary_oracle},
      {"2 mode oracle", mode_oracle},
      {"3 threshold properties", threshold_properties},
      {"4 darcy comparison", darcy_comparison},
      {"5 truncation robustness", truncation_robustness},
      {"6 eigenmode residuals", eigenmode_residuals},
      {"7 dynamics", dynamics_suite},
      {"8 multiplier identities", alpha_identities},
      {"9 mu scaling", mu_scaling},
  };
  int failures = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      check(o);
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::printf("%s  %-26s %s\n", o.passed ? "PASS" : "FAIL", name.c_str(), o.detail.str().c_str());
    failures += o.passed ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
