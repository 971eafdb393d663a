#pragma once

#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

#include "ucfem/mesh.hpp"

namespace ucfem {

class CoefficientError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Value, gradient and Hessian of a scalar coefficient at a point.
struct ScalarJet {
  double value = 0.0;
  Eigen::Vector2d grad = Eigen::Vector2d::Zero();
  Eigen::Matrix2d hess = Eigen::Matrix2d::Zero();
};

struct MaterialPoint {
  ScalarJet mu;
  ScalarJet lambda;
  double rho = 0.0;
};

/// Identifies the side of a coefficient interface a point belongs to. The
/// centroid of the cell containing the point is used; it never lies on an
/// interface for a fitted mesh.
struct CellSide {
  Point centroid;
};

enum class MaterialVariant { constant, smooth, plane_jump, inclusion };
enum class RhoSign { negative, positive };  // rho = -k^2 or rho = +k^2

/// Lame parameters mu, lambda and density rho = -/+ k^2.
///
/// Variants:
///  - constant:   mu, lambda constant
///  - smooth:     mu = 1 + sin(x) sin(y) / 2, lambda = 1.25 + cos(x) cos(y) / 2
///  - plane_jump: mu = mu_plus above y = eta and mu_minus below
///  - inclusion:  mu = mu_inner inside `rect`, mu_outer elsewhere
class MaterialModel {
 public:
  static MaterialModel constant(double mu, double lambda, double k, RhoSign sign = RhoSign::negative);
  static MaterialModel smooth(double k, RhoSign sign = RhoSign::negative);
  static MaterialModel plane_jump(double mu_plus, double mu_minus, double eta, double lambda, double k,
                                  RhoSign sign = RhoSign::negative);
  static MaterialModel inclusion(double mu_inner, double mu_outer, const Rect& rect, double lambda, double k,
                                 RhoSign sign = RhoSign::negative);

  /// Evaluates inside a cell. Jump variants require `side`.
  MaterialPoint eval(const std::optional<CellSide>& side, const Point& x) const;

  MaterialVariant variant() const { return variant_; }
  bool globally_smooth() const { return variant_ == MaterialVariant::constant || variant_ == MaterialVariant::smooth; }
  double k() const { return k_; }
  double rho() const { return sign_ == RhoSign::negative ? -k_ * k_ : k_ * k_; }
  RhoSign rho_sign() const { return sign_; }

  double mu_plus() const { return mu_a_; }
  double mu_minus() const { return mu_b_; }
  double eta() const { return eta_; }
  const Rect& rect() const { return rect_; }

  /// True if `side` lies in the region carrying mu_plus (above eta, or inside the inclusion).
  bool upper_side(const CellSide& side) const;

 private:
  MaterialModel() = default;
  void validate() const;

  MaterialVariant variant_ = MaterialVariant::constant;
  double mu_a_ = 1.0;  // constant mu, mu_plus, or mu_inner
  double mu_b_ = 1.0;  // mu_minus or mu_outer
  double lambda_ = 1.25;
  double eta_ = 0.5;
  Rect rect_{0, 1, 0, 1};
  double k_ = 1.0;
  RhoSign sign_ = RhoSign::negative;
};

}  // namespace ucfem
