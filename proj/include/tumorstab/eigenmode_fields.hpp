#pragma once

#include <array>
#include <iosfwd>

#include <Eigen/Core>
#include <json.hpp>

#include "tumorstab/kernels/tolerance.hpp"
#include "tumorstab/mode_solver.hpp"
#include "tumorstab/model.hpp"
#include "tumorstab/radial_stationary.hpp"

namespace tumorstab {

/// Particular-part data at r = 1.
struct BoundaryData {
  double v_tilde = 0.0;
  double w_tilde = 0.0;
  double v_tilde_prime = 0.0;
  double w_tilde_prime = 0.0;
};

/// Rejects l < 2; degree 1 is the translation mode (alpha_1 = 0), no fields are built for it.
void require_field_degree(int l);

[[nodiscard]] BoundaryData boundary_data(int l, const ModeProfile& mode, const RadialStationary& st,
                                         const ModelFunctions& fns, Tolerance quad_tol = {1e-13, 1e-15});

struct ModeConstants {
  double A1 = 0.0;
  double C1_tilde = 0.0;  // C_1 / sqrt(l(2l+1))
  double B1 = 0.0;        // toroidal constant, zero for every l >= 2
  Eigen::Vector3d a_vec = Eigen::Vector3d::Zero();
  double closed_form_sum = 0.0;  // A1 + C1_tilde from the eliminated combination
  double combination_gap = 0.0;  // |A1 + C1_tilde - closed_form_sum|
};

/// Closed form of A1 + C1_tilde obtained by eliminating between the two traction equations.
[[nodiscard]] double combination_closed_form(int l, double gamma, const BoundaryData& bd, const ModelFunctions& fns,
                                             const RadialStationary& st);

/// Solves the 2x2 traction system for (A1, C1_tilde). Throws DegreeError when it is singular and
/// PostconditionError when the closed-form combination disagrees beyond 1e-9.
[[nodiscard]] ModeConstants solve_constants(int l, double gamma, const BoundaryData& bd, const ModelFunctions& fns,
                                            const RadialStationary& st);

/// Interior linearised solution for one harmonic (l, m) on the unit ball.
///
/// Velocity = H1(r) Y omega + H2(r) grad_omega Y (+ x(r) X, identically zero);
/// pressure psi = (4/3) g'(sigma_s) phi + P; nutrient phi = F_l.
class EigenmodeFields {
 public:
  EigenmodeFields(int l, int m, double gamma, ModeConstants constants, BoundaryData bd, ModeProfile mode,
                  const RadialStationary& st, ModelFunctions fns, Tolerance quad_tol = {1e-13, 1e-15});

  [[nodiscard]] int l() const { return l_; }
  [[nodiscard]] int m() const { return m_; }
  [[nodiscard]] double gamma() const { return gamma_; }
  [[nodiscard]] const ModeConstants& constants() const { return c_; }
  [[nodiscard]] const BoundaryData& boundary() const { return bd_; }
  [[nodiscard]] const ModeProfile& mode() const { return mode_; }
  [[nodiscard]] const ModelFunctions& functions() const { return fns_; }

  [[nodiscard]] double P(double r) const;
  [[nodiscard]] double P_prime(double r) const;
  [[nodiscard]] double x(double r) const;
  [[nodiscard]] double v(double r) const;
  [[nodiscard]] double v_prime(double r) const;
  [[nodiscard]] double w(double r) const;
  [[nodiscard]] double w_prime(double r) const;
  [[nodiscard]] double v_tilde(double r) const;
  [[nodiscard]] double v_tilde_prime(double r) const;
  [[nodiscard]] double w_tilde(double r) const;
  [[nodiscard]] double w_tilde_prime(double r) const;
  [[nodiscard]] double F1(double r) const;
  [[nodiscard]] double F2(double r) const;
  [[nodiscard]] double G(double r) const;  // g'(sigma_s) F_l
  [[nodiscard]] double G_prime(double r) const;
  [[nodiscard]] double H1(double r) const;
  [[nodiscard]] double H2(double r) const;
  [[nodiscard]] double phi(double r) const { return mode_.value(r); }
  [[nodiscard]] double psi(double r) const;
  /// Coefficient of Y_lm in psi(1, omega): -(4/3) g'(1) sigma_s'(1) + 2(2l+3) A1.
  [[nodiscard]] double psi_boundary() const;
  [[nodiscard]] double sigma_prime_at_boundary() const { return sigma_prime_.value(1.0); }

  /// Radii k/256, k = 0..256.
  [[nodiscard]] static std::vector<double> collocation_radii();

 private:
  [[nodiscard]] double Jv(double r) const;  // integral of s^(l+3) F1 over [0, r]
  [[nodiscard]] double Kw(double r) const;  // integral of s^(2-l) F2 over [r, 1]

  int l_;
  int m_;
  double gamma_;
  ModeConstants c_;
  BoundaryData bd_;
  ModeProfile mode_;
  ModelFunctions fns_;
  HermiteTable sigma_;
  HermiteTable sigma_prime_;
  Tolerance quad_tol_;
  double s1_;
  double s2_;
};

/// Solves the constants and builds the fields for (l, m) at surface tension gamma.
[[nodiscard]] EigenmodeFields assemble_fields(int l, int m, double gamma, const ModeProfile& mode,
                                              const RadialStationary& st, const ModelFunctions& fns);

/// Sup-norm residuals over the collocation radii (absolute values).
struct ResidualReport {
  double divergence = 0.0;
  double momentum_v = 0.0;
  double momentum_x = 0.0;
  double momentum_w = 0.0;
  double pressure_harmonic = 0.0;
  double traction_normal = 0.0;
  double traction_tangential = 0.0;
  double translation = 0.0;
  double rotation = 0.0;
  double combination = 0.0;
  double center_values = 0.0;      // max of |v(0)|, |w(0)|, |x(0)|
  double pressure_log_slope = 0.0; // |d log P / d log r - l| on [0.25, 1]
  double alpha_formula = 0.0;      // multiplier from the threshold formula
  double alpha_boundary = 0.0;     // g(1) + l(A1 + C1_tilde) + s1 v_tilde(1) - s2 w_tilde(1)
  double alpha_fields = 0.0;       // g(1) + H1(1)
  double multiplier_cross_check = 0.0;  // |alpha_boundary - alpha_formula|
  double multiplier_field_check = 0.0;  // |alpha_fields - alpha_formula|

  [[nodiscard]] double max_field_residual() const;
  [[nodiscard]] bool passed(double field_tol = 1e-6, double multiplier_tol = 1e-8) const;
};

/// `alpha_formula` is the multiplier alpha_l(gamma) from the spectrum.
[[nodiscard]] ResidualReport residual_report(const EigenmodeFields& fields, double alpha_formula);

[[nodiscard]] nlohmann::json to_json(const ResidualReport& report);
[[nodiscard]] nlohmann::json to_json(const EigenmodeFields& fields, const ResidualReport& report);

/// CSV `r,P_lm,v_lm,w_lm,x_lm,H_l1,H_l2` on 257 uniform radii, 17 significant digits.
void write_fields_csv(std::ostream& os, const EigenmodeFields& fields);

}  // namespace tumorstab
