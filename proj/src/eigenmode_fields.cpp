#include "tumorstab/eigenmode_fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "tumorstab/errors.hpp"
#include "tumorstab/kernels/quadrature.hpp"
#include "tumorstab/spherical_harmonics.hpp"

namespace tumorstab {

namespace {

constexpr int kCollocationIntervals = 256;
constexpr double kFdStep = 1e-3;

double s1_of(int l) { return std::sqrt((l + 1.0) / (2.0 * l + 1.0)); }
double s2_of(int l) { return std::sqrt(static_cast<double>(l) / (2.0 * l + 1.0)); }

// Fourth-order first derivative of f at r, one-sided when the centred stencil leaves [0, 1].
template <typename F>
double fd_derivative(const F& f, double r, double h = kFdStep) {
  if (r - 2.0 * h >= 0.0 && r + 2.0 * h <= 1.0) {
    return (f(r - 2.0 * h) - 8.0 * f(r - h) + 8.0 * f(r + h) - f(r + 2.0 * h)) / (12.0 * h);
  }
  if (r + 4.0 * h <= 1.0) {
    return (-25.0 * f(r) + 48.0 * f(r + h) - 36.0 * f(r + 2.0 * h) + 16.0 * f(r + 3.0 * h) - 3.0 * f(r + 4.0 * h)) /
           (12.0 * h);
  }
  return (25.0 * f(r) - 48.0 * f(r - h) + 36.0 * f(r - 2.0 * h) - 16.0 * f(r - 3.0 * h) + 3.0 * f(r - 4.0 * h)) /
         (12.0 * h);
}

}  // namespace

void require_field_degree(int l) {
  if (l == 1) {
    throw DegreeError("eigenmode fields: l = 1 is the translation mode (alpha_1 = 0); fields are not assembled");
  }
  if (l < 2) throw DegreeError("eigenmode fields: defined for l >= 2, got l = " + std::to_string(l));
}

BoundaryData boundary_data(int l, const ModeProfile& mode, const RadialStationary& st, const ModelFunctions& fns,
                           Tolerance quad_tol) {
  require_field_degree(l);
  if (mode.l != l) throw ValidationError("boundary_data: mode degree does not match l");
  if (std::abs(st.R_s - 1.0) > 1e-12) throw ValidationError("boundary_data: needs a unit-radius stationary state");
  const double s1 = s1_of(l);
  const double s2 = s2_of(l);
  const double I = quad(
      [&](double r) {
        // F_l r^(l+2) = scale h r^(2l+2); pow keeps the product finite for large l
        return fns.g_prime(st.sigma(r)) * mode.scale * mode.h(r) * std::pow(r, 2 * l + 2);
      },
      0.0, 1.0, quad_tol);
  const double gs = fns.g_prime(1.0) * st.sigma_s_prime_at_R;
  const double ld = l;
  BoundaryData bd;
  bd.v_tilde = s1 * I;
  bd.w_tilde = -s2 * gs / (2.0 * ld - 1.0);
  bd.v_tilde_prime = -s1 * gs - (ld + 2.0) * s1 * I;
  bd.w_tilde_prime = s2 * ld * gs / (2.0 * ld - 1.0);
  return bd;
}

double combination_closed_form(int l, double gamma, const BoundaryData& bd, const ModelFunctions& fns,
                               const RadialStationary& st) {
  require_field_degree(l);
  const double ld = l;
  const double gs = fns.g_prime(1.0) * st.sigma_s_prime_at_R;
  const double q = std::sqrt(ld * (2.0 * ld + 1.0));
  const double s1 = s1_of(l);
  const double num = 0.5 * gamma * (1.0 - ld) * (2.0 * ld * ld + 5.0 * ld + 2.0) - (4.0 * ld + 2.0) * gs +
                     (2.0 * ld - 2.0) * fns.g(1.0) + (4.0 * ld * ld + 5.0 * ld + 3.0) / q * bd.w_tilde_prime -
                     s1 * (4.0 * ld - 1.0) * bd.v_tilde_prime + 3.0 * (ld * ld - 1.0) / q * bd.w_tilde -
                     3.0 * (ld + 2.0) * s1 * bd.v_tilde;
  return num / (2.0 * (ld - 1.0) * (2.0 * ld * ld + 4.0 * ld + 3.0));
}

ModeConstants solve_constants(int l, double gamma, const BoundaryData& bd, const ModelFunctions& fns,
                              const RadialStationary& st) {
  require_field_degree(l);
  const double ld = l;
  const double s1 = s1_of(l);
  const double s2 = s2_of(l);
  const double g1 = fns.g(1.0);
  const double gs = fns.g_prime(1.0) * st.sigma_s_prime_at_R;

  // Unknowns (A1, C1_tilde): normal then tangential traction balance.
  Eigen::Matrix2d M;
  M << ld * ld - ld - 3.0, ld * ld - ld, (2.0 * ld * ld + 4.0 * ld) / (ld + 1.0), 2.0 * (ld - 1.0);
  Eigen::Vector2d rhs;
  rhs << s2 * bd.w_tilde_prime - s1 * bd.v_tilde_prime + 0.25 * gamma * (2.0 - ld * ld - ld) + 2.0 * g1 - gs,
      s2 * ((ld - 1.0) / ld * bd.w_tilde + bd.w_tilde_prime / ld) -
          s1 * ((ld + 2.0) / (ld + 1.0) * bd.v_tilde - bd.v_tilde_prime / (ld + 1.0)) - 2.0 * g1;

  const double det = M.determinant();
  if (std::abs(det) < 1e-12 * M.cwiseAbs().maxCoeff() * M.cwiseAbs().maxCoeff()) {
    std::ostringstream os;
    os.precision(17);
    os << "solve_constants: degenerate degree l = " << l << ", determinant " << det;
    throw DegreeError(os.str());
  }
  const Eigen::Vector2d x = M.partialPivLu().solve(rhs);

  ModeConstants c;
  c.A1 = x[0];
  c.C1_tilde = x[1];
  c.B1 = 0.0;
  c.a_vec.setZero();
  c.closed_form_sum = combination_closed_form(l, gamma, bd, fns, st);
  c.combination_gap = std::abs(c.A1 + c.C1_tilde - c.closed_form_sum);
  const double scale = std::max({1.0, std::abs(c.A1), std::abs(c.C1_tilde)});
  if (c.combination_gap > 1e-9 * scale) {
    std::ostringstream os;
    os.precision(17);
    os << "solve_constants: A1 + C1_tilde = " << c.A1 + c.C1_tilde << " disagrees with the eliminated form "
       << c.closed_form_sum << " at l = " << l;
    throw PostconditionError(os.str());
  }
  return c;
}

EigenmodeFields::EigenmodeFields(int l, int m, double gamma, ModeConstants constants, BoundaryData bd,
                                 ModeProfile mode, const RadialStationary& st, ModelFunctions fns,
                                 Tolerance quad_tol)
    : l_(l),
      m_(m),
      gamma_(gamma),
      c_(constants),
      bd_(bd),
      mode_(std::move(mode)),
      fns_(std::move(fns)),
      sigma_(st.grid.nodes, st.sigma_s, st.sigma_s_prime),
      sigma_prime_(st.grid.nodes, st.sigma_s_prime, st.sigma_s_second),
      quad_tol_(quad_tol),
      s1_(s1_of(l)),
      s2_(s2_of(l)) {
  require_field_degree(l);
  if (std::abs(m) > l) throw ValidationError("EigenmodeFields: |m| must not exceed l");
  if (mode_.l != l) throw ValidationError("EigenmodeFields: mode degree does not match l");
}

double EigenmodeFields::P(double r) const { return 2.0 * (2.0 * l_ + 3.0) * c_.A1 * std::pow(r, l_); }

double EigenmodeFields::P_prime(double r) const {
  return 2.0 * (2.0 * l_ + 3.0) * c_.A1 * l_ * std::pow(r, l_ - 1);
}

double EigenmodeFields::x(double r) const { return c_.B1 * std::pow(r, l_); }

double EigenmodeFields::G(double r) const { return fns_.g_prime(sigma_.value(r)) * mode_.value(r); }

double EigenmodeFields::G_prime(double r) const {
  const double s = sigma_.value(r);
  return fns_.g_second_at(s) * sigma_prime_.value(r) * mode_.value(r) + fns_.g_prime(s) * mode_.derivative(r);
}

double EigenmodeFields::F1(double r) const { return s1_ * (-G_prime(r) + l_ * G(r) / r); }

double EigenmodeFields::F2(double r) const { return s2_ * (G_prime(r) + (l_ + 1.0) * G(r) / r); }

double EigenmodeFields::Jv(double r) const {
  if (r <= 0.0) return 0.0;
  return quad([&](double s) { return std::pow(s, l_ + 3) * F1(s); }, 0.0, r, quad_tol_);
}

double EigenmodeFields::Kw(double r) const {
  if (r >= 1.0) return 0.0;
  return quad([&](double s) { return std::pow(s, 2 - l_) * F2(s); }, r, 1.0, quad_tol_);
}

double EigenmodeFields::v_tilde(double r) const {
  if (r <= 0.0) return 0.0;
  return (s1_ * r * G(r) + std::pow(r, -l_ - 2) * Jv(r)) / (2.0 * l_ + 3.0);
}

double EigenmodeFields::v_tilde_prime(double r) const {
  if (r <= 0.0) return 0.0;
  return (s1_ * (G(r) + r * G_prime(r)) - (l_ + 2.0) * std::pow(r, -l_ - 3) * Jv(r) + r * F1(r)) / (2.0 * l_ + 3.0);
}

double EigenmodeFields::w_tilde(double r) const {
  if (r <= 0.0) return 0.0;
  return (s2_ * r * G(r) + std::pow(r, l_ - 1) * Kw(r)) / (2.0 * l_ - 1.0);
}

double EigenmodeFields::w_tilde_prime(double r) const {
  const double kw = Kw(r);
  const double tail = l_ == 2 ? kw : (r <= 0.0 ? 0.0 : std::pow(r, l_ - 2) * kw);
  return (s2_ * (G(r) + r * G_prime(r)) + (l_ - 1.0) * tail - r * F2(r)) / (2.0 * l_ - 1.0);
}

double EigenmodeFields::v(double r) const {
  return s1_ * (2.0 * l_ / (l_ + 1.0)) * c_.A1 * std::pow(r, l_ + 1) - v_tilde(r);
}

double EigenmodeFields::v_prime(double r) const {
  return s1_ * 2.0 * l_ * c_.A1 * std::pow(r, l_) - v_tilde_prime(r);
}

double EigenmodeFields::w(double r) const {
  const double C1 = c_.C1_tilde * std::sqrt(l_ * (2.0 * l_ + 1.0));
  return C1 * std::pow(r, l_ - 1) + s2_ * (2.0 * l_ + 3.0) * c_.A1 * std::pow(r, l_ + 1) - w_tilde(r);
}

double EigenmodeFields::w_prime(double r) const {
  const double C1 = c_.C1_tilde * std::sqrt(l_ * (2.0 * l_ + 1.0));
  return (l_ - 1.0) * C1 * std::pow(r, l_ - 2) + s2_ * (2.0 * l_ + 3.0) * (l_ + 1.0) * c_.A1 * std::pow(r, l_) -
         w_tilde_prime(r);
}

double EigenmodeFields::H1(double r) const { return -s1_ * v(r) + s2_ * w(r); }

double EigenmodeFields::H2(double r) const {
  return v(r) / std::sqrt((l_ + 1.0) * (2.0 * l_ + 1.0)) + w(r) / std::sqrt(l_ * (2.0 * l_ + 1.0));
}

double EigenmodeFields::psi(double r) const {
  return 4.0 / 3.0 * fns_.g_prime(sigma_.value(r)) * mode_.value(r) + P(r);
}

double EigenmodeFields::psi_boundary() const {
  return -4.0 / 3.0 * fns_.g_prime(1.0) * sigma_prime_at_boundary() + 2.0 * (2.0 * l_ + 3.0) * c_.A1;
}

std::vector<double> EigenmodeFields::collocation_radii() {
  std::vector<double> r(kCollocationIntervals + 1);
  for (int k = 0; k <= kCollocationIntervals; ++k) r[static_cast<std::size_t>(k)] = k / double(kCollocationIntervals);
  return r;
}

EigenmodeFields assemble_fields(int l, int m, double gamma, const ModeProfile& mode, const RadialStationary& st,
                                const ModelFunctions& fns) {
  const auto bd = boundary_data(l, mode, st, fns);
  const auto constants = solve_constants(l, gamma, bd, fns, st);
  return EigenmodeFields(l, m, gamma, constants, bd, mode, st, fns);
}

double ResidualReport::max_field_residual() const {
  return std::max({divergence, momentum_v, momentum_x, momentum_w, pressure_harmonic, traction_normal,
                   traction_tangential, translation, rotation, combination, center_values});
}

bool ResidualReport::passed(double field_tol, double multiplier_tol) const {
  return max_field_residual() < field_tol && pressure_log_slope < 1e-8 && multiplier_cross_check < multiplier_tol &&
         multiplier_field_check < multiplier_tol;
}

namespace {

// Angular moments of the harmonic: integral of Y omega, of grad Y, and of grad Y x omega over S^2.
// A Gauss rule of this size integrates the polynomial integrands exactly.
struct AngularMoments {
  Eigen::Vector3d y_omega = Eigen::Vector3d::Zero();
  Eigen::Vector3d grad = Eigen::Vector3d::Zero();
  Eigen::Vector3d grad_cross_omega = Eigen::Vector3d::Zero();
};

AngularMoments angular_moments(int l, int m) {
  const auto grid = make_sphere_grid(l + 2, 2 * l + 4);
  const auto idx = static_cast<Eigen::Index>(sh_index(l, m));
  AngularMoments out;
  for (Eigen::Index i = 0; i < grid.theta.size(); ++i) {
    const double th = grid.theta[i];
    for (Eigen::Index j = 0; j < grid.phi.size(); ++j) {
      const double ph = grid.phi[j];
      const double w = grid.theta_weights[i] * grid.phi_weight();
      const auto sh = real_sh_gradient(l, th, ph);
      const Eigen::Vector3d omega(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      const Eigen::Vector3d e_theta(std::cos(th) * std::cos(ph), std::cos(th) * std::sin(ph), -std::sin(th));
      const Eigen::Vector3d e_phi(-std::sin(ph), std::cos(ph), 0.0);
      const Eigen::Vector3d grad = sh.d_theta[idx] * e_theta + sh.d_phi_over_sin[idx] * e_phi;
      out.y_omega += w * sh.value[idx] * omega;
      out.grad += w * grad;
      out.grad_cross_omega += w * grad.cross(omega);
    }
  }
  return out;
}

}  // namespace

ResidualReport residual_report(const EigenmodeFields& f, double alpha_formula) {
  const int l = f.l();
  const double ld = l;
  const double s1 = s1_of(l);
  const double s2 = s2_of(l);
  const auto& fns = f.functions();
  const double g1 = fns.g(1.0);
  ResidualReport rep;

  auto L = [](int k, double r, double d0, double d1, double d2) { return d2 + 2.0 * d1 / r - k * (k + 1.0) * d0 / (r * r); };
  auto vp = [&](double r) { return f.v_prime(r); };
  auto wp = [&](double r) { return f.w_prime(r); };
  auto Pp = [&](double r) { return f.P_prime(r); };

  for (double r : EigenmodeFields::collocation_radii()) {
    if (r == 0.0) continue;
    const double v = f.v(r);
    const double w = f.w(r);
    const double dv = f.v_prime(r);
    const double dw = f.w_prime(r);
    const double G = f.G(r);
    const double div = s2 * (dw - (ld - 1.0) * w / r) - s1 * (dv + (ld + 2.0) * v / r) - G;
    rep.divergence = std::max(rep.divergence, std::abs(div));

    const double P = f.P(r);
    const double dP = f.P_prime(r);
    const double mv = s1 * (-dP + ld * P / r) - (L(l + 1, r, v, dv, fd_derivative(vp, r)) - f.F1(r));
    const double mw = s2 * (dP + (ld + 1.0) * P / r) - (L(l - 1, r, w, dw, fd_derivative(wp, r)) - f.F2(r));
    rep.momentum_v = std::max(rep.momentum_v, std::abs(mv));
    rep.momentum_w = std::max(rep.momentum_w, std::abs(mw));
    const double B1 = f.constants().B1;
    const double dx = B1 * ld * std::pow(r, l - 1);
    const double ddx = B1 * ld * (ld - 1.0) * std::pow(r, l - 2);
    rep.momentum_x = std::max(rep.momentum_x, std::abs(L(l, r, f.x(r), dx, ddx)));
    rep.pressure_harmonic = std::max(rep.pressure_harmonic, std::abs(L(l, r, P, dP, fd_derivative(Pp, r))));
    if (r >= 0.25) {
      // d log P / d log r from the tabulated factor
      const double slope = P != 0.0 ? r * dP / P : ld;
      rep.pressure_log_slope = std::max(rep.pressure_log_slope, std::abs(slope - ld));
    }
  }
  rep.center_values = std::max({std::abs(f.v(0.0)), std::abs(f.w(0.0)), std::abs(f.x(0.0))});

  // Traction: normal and tangential coefficients of T(v, psi) n against the boundary forcing.
  const double gsig = fns.g_prime(1.0) * f.sigma_prime_at_boundary();
  const double H1p = -s1 * f.v_prime(1.0) + s2 * f.w_prime(1.0);
  const double H2p =
      f.v_prime(1.0) / std::sqrt((ld + 1.0) * (2.0 * ld + 1.0)) + f.w_prime(1.0) / std::sqrt(ld * (2.0 * ld + 1.0));
  const double H1b = f.H1(1.0);
  const double H2b = f.H2(1.0);
  const double normal_lhs = 2.0 / 3.0 * gsig + 2.0 * H1p - f.psi_boundary();
  const double normal_rhs = f.gamma() * (1.0 - ld * (ld + 1.0) / 2.0) + 4.0 * g1;
  rep.traction_normal = std::abs(normal_lhs - normal_rhs);
  rep.traction_tangential = std::abs(H1b - H2b + H2p + 2.0 * g1);

  rep.combination = f.constants().combination_gap;

  // Constraint integrals; the angular factors are exact, the radial ones by quadrature.
  const auto mom = angular_moments(l, f.m());
  const double r2H1 = quad([&](double r) { return r * r * f.H1(r); }, 0.0, 1.0, {1e-12, 1e-14});
  const double r2H2 = quad([&](double r) { return r * r * f.H2(r); }, 0.0, 1.0, {1e-12, 1e-14});
  const double r3H2 = quad([&](double r) { return r * r * r * f.H2(r); }, 0.0, 1.0, {1e-12, 1e-14});
  const Eigen::Vector3d translation =
      4.0 * std::numbers::pi / 3.0 * f.constants().a_vec + r2H1 * mom.y_omega + r2H2 * mom.grad;
  // Toroidal part B1 r^l X with X = omega x grad Y / sqrt(l(l+1)), so X x omega = grad Y / sqrt(l(l+1)).
  const Eigen::Vector3d rotation =
      r3H2 * mom.grad_cross_omega + f.constants().B1 / ((ld + 4.0) * std::sqrt(ld * (ld + 1.0))) * mom.grad;
  rep.translation = translation.norm();
  rep.rotation = rotation.norm();

  rep.alpha_formula = alpha_formula;
  const auto& bd = f.boundary();
  rep.alpha_boundary =
      g1 + ld * (f.constants().A1 + f.constants().C1_tilde) + s1 * bd.v_tilde - s2 * bd.w_tilde;
  rep.alpha_fields = g1 + H1b;
  rep.multiplier_cross_check = std::abs(rep.alpha_boundary - alpha_formula);
  rep.multiplier_field_check = std::abs(rep.alpha_fields - alpha_formula);
  return rep;
}

nlohmann::json to_json(const ResidualReport& r) {
  return {{"divergence", r.divergence},
          {"momentum_v", r.momentum_v},
          {"momentum_x", r.momentum_x},
          {"momentum_w", r.momentum_w},
          {"pressure_harmonic", r.pressure_harmonic},
          {"traction_normal", r.traction_normal},
          {"traction_tangential", r.traction_tangential},
          {"translation", r.translation},
          {"rotation", r.rotation},
          {"combination", r.combination},
          {"center_values", r.center_values},
          {"pressure_log_slope", r.pressure_log_slope},
          {"alpha_formula", r.alpha_formula},
          {"alpha_boundary", r.alpha_boundary},
          {"alpha_fields", r.alpha_fields},
          {"multiplier_cross_check", r.multiplier_cross_check},
          {"multiplier_field_check", r.multiplier_field_check},
          {"passed", r.passed()}};
}

nlohmann::json to_json(const EigenmodeFields& f, const ResidualReport& r) {
  return {{"l", f.l()},
          {"m", f.m()},
          {"gamma", f.gamma()},
          {"A1", f.constants().A1},
          {"C1_tilde", f.constants().C1_tilde},
          {"B1", f.constants().B1},
          {"psi_boundary", f.psi_boundary()},
          {"residuals", to_json(r)}};
}

void write_fields_csv(std::ostream& os, const EigenmodeFields& f) {
  const auto old = os.precision(17);
  os << "r,P_lm,v_lm,w_lm,x_lm,H_l1,H_l2\n";
  for (double r : EigenmodeFields::collocation_radii()) {
    os << r << ',' << f.P(r) << ',' << f.v(r) << ',' << f.w(r) << ',' << f.x(r) << ',' << f.H1(r) << ',' << f.H2(r)
       << '\n';
  }
  os.precision(old);
}

}  // namespace tumorstab
