#include "ucfem/manufactured.hpp"

#include <cmath>
#include <numbers>

namespace ucfem {

namespace {

// f(t) with its first two derivatives.
struct Jet1 {
  double v, d1, d2;
};

Jet1 sin_jet(double w, double t) { return {std::sin(w * t), w * std::cos(w * t), -w * w * std::sin(w * t)}; }
Jet1 cos_jet(double w, double t) { return {std::cos(w * t), -w * std::sin(w * t), -w * w * std::cos(w * t)}; }
Jet1 quad_jet(double a, double b, double c, double t) { return {a + b * t + c * t * t, b + 2 * c * t, 2 * c}; }

// Writes component `comp` of a separable field A(x) B(y) into `jet`.
void set_separable(DisplacementJet& jet, int comp, const Jet1& A, const Jet1& B) {
  jet.u(comp) = A.v * B.v;
  jet.grad(comp, 0) = A.d1 * B.v;
  jet.grad(comp, 1) = A.v * B.d1;
  jet.hess[static_cast<std::size_t>(comp)] << A.d2 * B.v, A.d1 * B.d1, A.d1 * B.d1, A.v * B.d2;
}

// Product g * v for a scalar g with gradient/Hessian and a vector field jet v.
DisplacementJet scale_jet(double g, const Eigen::Vector2d& dg, const Eigen::Matrix2d& ddg, const DisplacementJet& v) {
  DisplacementJet out;
  for (int a = 0; a < 2; ++a) {
    out.u(a) = g * v.u(a);
    for (int i = 0; i < 2; ++i) out.grad(a, i) = dg(i) * v.u(a) + g * v.grad(a, i);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out.hess[static_cast<std::size_t>(a)](i, j) = ddg(i, j) * v.u(a) + dg(i) * v.grad(a, j) +
                                                      dg(j) * v.grad(a, i) + g * v.hess[static_cast<std::size_t>(a)](i, j);
  }
  return out;
}

}  // namespace

Eigen::Matrix2d stress(const MaterialPoint& m, const Eigen::Matrix2d& grad_u) {
  return m.mu.value * (grad_u + grad_u.transpose()) + m.lambda.value * grad_u.trace() * Eigen::Matrix2d::Identity();
}

Eigen::Vector2d lame_operator(const MaterialPoint& m, const DisplacementJet& jet) {
  const Eigen::Matrix2d& G = jet.grad;
  const double div = G.trace();
  Eigen::Vector2d div_sigma;
  for (int a = 0; a < 2; ++a) {
    double s = 0.0;
    for (int b = 0; b < 2; ++b) {
      s += m.mu.grad(b) * (G(a, b) + G(b, a));
      s += m.mu.value * (jet.hess[static_cast<std::size_t>(a)](b, b) + jet.hess[static_cast<std::size_t>(b)](a, b));
    }
    const double ddiv = jet.hess[0](0, a) + jet.hess[1](1, a);
    s += m.lambda.grad(a) * div + m.lambda.value * ddiv;
    div_sigma(a) = s;
  }
  return -div_sigma - m.rho * jet.u;
}

JumpCoefficients jump_coefficients(double mu_plus, double mu_minus, double eta, double k) {
  JumpCoefficients c{};
  const double kpi = k * std::numbers::pi;
  c.b1 = 0.0;
  c.c1 = kpi / (2.0 * eta) * ((mu_plus - mu_minus) / mu_plus);
  c.a1 = 1.0 - c.c1 * eta * eta;
  c.b2 = 1.0;
  c.c2 = -1.0 / (2.0 * eta);
  c.a2 = 1.0 - c.b2 * eta - c.c2 * eta * eta;
  return c;
}

ReferenceSolution ReferenceSolution::oscillatory(double k) {
  ReferenceSolution s;
  s.variant_ = SolutionVariant::oscillatory;
  s.k_ = k;
  return s;
}

ReferenceSolution ReferenceSolution::plane_jump(const JumpCoefficients& c, double eta, double k) {
  ReferenceSolution s;
  s.variant_ = SolutionVariant::plane_jump;
  s.coeff_ = c;
  s.eta_ = eta;
  s.k_ = k;
  return s;
}

ReferenceSolution ReferenceSolution::inclusion(const Rect& rect, double k) {
  ReferenceSolution s;
  s.variant_ = SolutionVariant::inclusion;
  s.rect_ = rect;
  s.k_ = k;
  return s;
}

bool ReferenceSolution::upper(const std::optional<CellSide>& side) const {
  if (!side) throw CoefficientError("piecewise reference solution evaluated without a cell side");
  if (variant_ == SolutionVariant::plane_jump) return side->centroid.y() > eta_;
  return rect_.contains(side->centroid);
}

DisplacementJet ReferenceSolution::jet(const std::optional<CellSide>& side, const Point& x) const {
  if (variant_ == SolutionVariant::oscillatory) return branch_jet(true, x);
  return branch_jet(upper(side), x);
}

DisplacementJet ReferenceSolution::branch_jet(bool upper_branch, const Point& x) const {
  const double w = k_ * std::numbers::pi;
  DisplacementJet jet;
  switch (variant_) {
    case SolutionVariant::oscillatory: {
      const Jet1 sx = sin_jet(w, x.x()), sy = sin_jet(w, x.y());
      set_separable(jet, 0, sx, sy);
      set_separable(jet, 1, sx, sy);
      return jet;
    }
    case SolutionVariant::plane_jump: {
      if (upper_branch) {
        const auto& c = coeff_;
        set_separable(jet, 0, sin_jet(w, x.x()), quad_jet(c.a1, c.b1, c.c1, x.y()));
        set_separable(jet, 1, cos_jet(w, x.x()), quad_jet(c.a2, c.b2, c.c2, x.y()));
      } else {
        const Jet1 cy = cos_jet(w, x.y() - eta_);
        set_separable(jet, 0, sin_jet(w, x.x()), cy);
        set_separable(jet, 1, cos_jet(w, x.x()), cy);
      }
      return jet;
    }
    case SolutionVariant::inclusion: {
      DisplacementJet v;
      if (upper_branch) {
        set_separable(v, 0, cos_jet(w, x.x()), sin_jet(w, x.y()));
        set_separable(v, 1, cos_jet(w, x.x()), cos_jet(w, x.y()));
      } else {
        set_separable(v, 0, sin_jet(w, x.x()), sin_jet(w, x.y()));
        set_separable(v, 1, sin_jet(w, x.x()), cos_jet(w, x.y()));
      }
      const Rect& r = rect_;
      const double X = (x.x() - r.x0) * (x.x() - r.x1), dX = 2.0 * x.x() - r.x0 - r.x1;
      const double Y = (x.y() - r.y0) * (x.y() - r.y1), dY = 2.0 * x.y() - r.y0 - r.y1;
      const double zeta = X * Y;
      const Eigen::Vector2d dzeta(dX * Y, X * dY);
      Eigen::Matrix2d ddzeta;
      ddzeta << 2.0 * Y, dX * dY, dX * dY, 2.0 * X;
      const double g = zeta * zeta;
      const Eigen::Vector2d dg = 2.0 * zeta * dzeta;
      const Eigen::Matrix2d ddg = 2.0 * (dzeta * dzeta.transpose() + zeta * ddzeta);
      return scale_jet(g, dg, ddg, v);
    }
  }
  return jet;
}

Eigen::Vector2d ReferenceSolution::f(const MaterialModel& material, const std::optional<CellSide>& side,
                                     const Point& x) const {
  return lame_operator(material.eval(side, x), jet(side, x));
}

InterfaceReport verify_interface_conditions(const ReferenceSolution& solution, const MaterialModel& material,
                                            int samples) {
  InterfaceReport report;
  const double eta = solution.eta();
  for (int i = 0; i < samples; ++i) {
    const Point x((i + 0.5) / samples, eta);
    const DisplacementJet up = solution.branch_jet(true, x);
    const DisplacementJet lo = solution.branch_jet(false, x);
    const MaterialPoint m_up = material.eval(CellSide{Point(x.x(), eta + 0.25 * (1.0 - eta))}, x);
    const MaterialPoint m_lo = material.eval(CellSide{Point(x.x(), 0.5 * eta)}, x);
    const Eigen::Vector2d n(0.0, 1.0);
    const Eigen::Vector2d t_up = stress(m_up, up.grad) * n;
    const Eigen::Vector2d t_lo = stress(m_lo, lo.grad) * n;
    report.displacement_jump = std::max(report.displacement_jump, (up.u - lo.u).norm());
    report.traction_jump = std::max(report.traction_jump, (t_up - t_lo).norm());
  }
  return report;
}

}  // namespace ucfem
