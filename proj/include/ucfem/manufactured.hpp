#pragma once

#include <array>
#include <optional>

#include <Eigen/Core>

#include "ucfem/coefficients.hpp"
#include "ucfem/mesh.hpp"

namespace ucfem {

/// Displacement with first and second derivatives:
/// grad(a, b) = d u_a / d x_b, hess[a](i, j) = d^2 u_a / dx_i dx_j.
struct DisplacementJet {
  Eigen::Vector2d u = Eigen::Vector2d::Zero();
  Eigen::Matrix2d grad = Eigen::Matrix2d::Zero();
  std::array<Eigen::Matrix2d, 2> hess{Eigen::Matrix2d::Zero(), Eigen::Matrix2d::Zero()};
};

/// sigma(u) = 2 mu E(u) + lambda div(u) I.
Eigen::Matrix2d stress(const MaterialPoint& m, const Eigen::Matrix2d& grad_u);

/// L u = -div sigma(u) - rho u, expanded with the product rule.
Eigen::Vector2d lame_operator(const MaterialPoint& m, const DisplacementJet& jet);

/// Coefficients of the quadratic-in-y upper branch that make the plane-jump
/// solution continuous in displacement and traction across y = eta.
struct JumpCoefficients {
  double a1, b1, c1, a2, b2, c2;
};

JumpCoefficients jump_coefficients(double mu_plus, double mu_minus, double eta, double k);

enum class SolutionVariant { oscillatory, plane_jump, inclusion };

/// Closed-form reference displacements used by the experiments:
///  - oscillatory: u = sin(k pi x) sin(k pi y) (1, 1)
///  - plane_jump:  polynomial-times-trig branch above eta, trig branch below
///  - inclusion:   zeta^2 times a trig field that differs inside `rect`,
///                 zeta = (x - xL)(x - xR)(y - yL)(y - yR)
class ReferenceSolution {
 public:
  static ReferenceSolution oscillatory(double k);
  static ReferenceSolution plane_jump(const JumpCoefficients& c, double eta, double k);
  static ReferenceSolution inclusion(const Rect& rect, double k);

  SolutionVariant variant() const { return variant_; }
  bool needs_side() const { return variant_ != SolutionVariant::oscillatory; }

  DisplacementJet jet(const std::optional<CellSide>& side, const Point& x) const;
  Eigen::Vector2d u(const std::optional<CellSide>& side, const Point& x) const { return jet(side, x).u; }
  Eigen::Matrix2d grad_u(const std::optional<CellSide>& side, const Point& x) const { return jet(side, x).grad; }
  double divergence(const std::optional<CellSide>& side, const Point& x) const { return grad_u(side, x).trace(); }
  Eigen::Vector2d f(const MaterialModel& material, const std::optional<CellSide>& side, const Point& x) const;

  /// Explicit branch evaluation (upper = above eta / inside the inclusion).
  DisplacementJet branch_jet(bool upper, const Point& x) const;

  double k() const { return k_; }
  double eta() const { return eta_; }
  const JumpCoefficients& coefficients() const { return coeff_; }
  const Rect& rect() const { return rect_; }

 private:
  ReferenceSolution() = default;
  bool upper(const std::optional<CellSide>& side) const;

  SolutionVariant variant_ = SolutionVariant::oscillatory;
  double k_ = 1.0;
  double eta_ = 0.5;
  JumpCoefficients coeff_{};
  Rect rect_{0, 1, 0, 1};
};

struct InterfaceReport {
  double displacement_jump = 0.0;  // max |[u]| over samples
  double traction_jump = 0.0;      // max |[sigma(u) n]| over samples
};

/// Samples x = (i + 1/2) / samples on y = eta and compares both branches.
InterfaceReport verify_interface_conditions(const ReferenceSolution& solution, const MaterialModel& material,
                                            int samples);

}  // namespace ucfem
