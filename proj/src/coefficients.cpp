#include "ucfem/coefficients.hpp"

#include <cmath>

namespace ucfem {

MaterialModel MaterialModel::constant(double mu, double lambda, double k, RhoSign sign) {
  MaterialModel m;
  m.variant_ = MaterialVariant::constant;
  m.mu_a_ = m.mu_b_ = mu;
  m.lambda_ = lambda;
  m.k_ = k;
  m.sign_ = sign;
  m.validate();
  return m;
}

MaterialModel MaterialModel::smooth(double k, RhoSign sign) {
  MaterialModel m;
  m.variant_ = MaterialVariant::smooth;
  m.k_ = k;
  m.sign_ = sign;
  return m;
}

MaterialModel MaterialModel::plane_jump(double mu_plus, double mu_minus, double eta, double lambda, double k,
                                        RhoSign sign) {
  MaterialModel m;
  m.variant_ = MaterialVariant::plane_jump;
  m.mu_a_ = mu_plus;
  m.mu_b_ = mu_minus;
  m.eta_ = eta;
  m.lambda_ = lambda;
  m.k_ = k;
  m.sign_ = sign;
  if (!(eta > 0.0 && eta < 1.0)) throw CoefficientError("interface height must lie in (0, 1)");
  m.validate();
  return m;
}

MaterialModel MaterialModel::inclusion(double mu_inner, double mu_outer, const Rect& rect, double lambda, double k,
                                       RhoSign sign) {
  MaterialModel m;
  m.variant_ = MaterialVariant::inclusion;
  m.mu_a_ = mu_inner;
  m.mu_b_ = mu_outer;
  m.rect_ = rect;
  m.lambda_ = lambda;
  m.k_ = k;
  m.sign_ = sign;
  m.validate();
  return m;
}

void MaterialModel::validate() const {
  for (double mu : {mu_a_, mu_b_}) {
    if (!(mu > 0.0)) throw CoefficientError("shear modulus must be positive");
    if (!(lambda_ + 2.0 * mu > 0.0)) throw CoefficientError("lambda + 2 mu must be positive");
  }
}

bool MaterialModel::upper_side(const CellSide& side) const {
  switch (variant_) {
    case MaterialVariant::plane_jump: return side.centroid.y() > eta_;
    case MaterialVariant::inclusion: return rect_.contains(side.centroid);
    default: return true;
  }
}

MaterialPoint MaterialModel::eval(const std::optional<CellSide>& side, const Point& x) const {
  MaterialPoint mp;
  mp.rho = rho();
  switch (variant_) {
    case MaterialVariant::constant:
      mp.mu.value = mu_a_;
      mp.lambda.value = lambda_;
      break;
    case MaterialVariant::smooth: {
      const double sx = std::sin(x.x()), cx = std::cos(x.x());
      const double sy = std::sin(x.y()), cy = std::cos(x.y());
      mp.mu.value = 1.0 + 0.5 * sx * sy;
      mp.mu.grad << 0.5 * cx * sy, 0.5 * sx * cy;
      mp.mu.hess << -0.5 * sx * sy, 0.5 * cx * cy, 0.5 * cx * cy, -0.5 * sx * sy;
      mp.lambda.value = 1.25 + 0.5 * cx * cy;
      mp.lambda.grad << -0.5 * sx * cy, -0.5 * cx * sy;
      mp.lambda.hess << -0.5 * cx * cy, 0.5 * sx * sy, 0.5 * sx * sy, -0.5 * cx * cy;
      break;
    }
    case MaterialVariant::plane_jump:
    case MaterialVariant::inclusion:
      if (!side) throw CoefficientError("discontinuous material evaluated without a cell side");
      mp.mu.value = upper_side(*side) ? mu_a_ : mu_b_;
      mp.lambda.value = lambda_;
      break;
  }
  return mp;
}

}  // namespace ucfem
