#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ucfem/manufactured.hpp"
#include "support/fd_operator.hpp"

using namespace ucfem;
using namespace ucfem::oracle;
using std::numbers::pi;

TEST(Manufactured, RightHandSideMatchesFiniteDifferenceOperator) {
  for (const auto& v : all_variants()) EXPECT_LE(manufactured_deviation(v), 1e-6) << v.name << " k=" << v.material.k();
}

TEST(Manufactured, JetMatchesDifferences) {
  const ReferenceSolution s = ReferenceSolution::inclusion({0.25, 0.75, 0.25, 0.9}, 1.0);
  const Point x(0.4, 0.5);
  const std::optional<CellSide> side = CellSide{x};
  const DisplacementJet j = s.jet(side, x);
  auto u = [&](const Point& y) { return s.u(side, y); };
  auto ux = [&](const Point& y) { return Eigen::Vector2d(s.grad_u(side, y).col(0)); };
  for (int d = 0; d < 2; ++d) EXPECT_NEAR((j.grad.col(d) - diff4(u, x, d, 1e-3)).norm(), 0.0, 1e-10);
  for (int a = 0; a < 2; ++a)
    for (int d = 0; d < 2; ++d) EXPECT_NEAR(j.hess[a](0, d), diff4(ux, x, d, 1e-3)[a], 1e-9);
}

TEST(Manufactured, OscillatoryValues) {
  const ReferenceSolution s = ReferenceSolution::oscillatory(2.0);
  const Point x(0.1, 0.3);
  const double v = std::sin(2 * pi * 0.1) * std::sin(2 * pi * 0.3);
  EXPECT_NEAR(s.u(std::nullopt, x)[0], v, 1e-15);
  EXPECT_NEAR(s.u(std::nullopt, x)[1], v, 1e-15);
  EXPECT_FALSE(s.needs_side());
}

TEST(JumpCoefficients, WorkedExample) {
  const JumpCoefficients c = jump_coefficients(2.0, 1.0, 0.6, 4.0);
  EXPECT_NEAR(c.c1, 5 * pi / 3, 1e-12);
  EXPECT_NEAR(c.a1, 1 - 0.6 * pi, 1e-12);
  EXPECT_NEAR(c.b1, 0.0, 1e-15);
  EXPECT_NEAR(c.b2, 1.0, 1e-15);
  EXPECT_NEAR(c.c2, -5.0 / 6, 1e-12);
  EXPECT_NEAR(c.a2, 0.7, 1e-12);
}

TEST(JumpCoefficients, NoContrastIsContinuous) {
  const JumpCoefficients c = jump_coefficients(1.5, 1.5, 0.4, 3.0);
  EXPECT_EQ(c.c1, 0.0);
  EXPECT_EQ(c.a1, 1.0);
}

TEST(InterfaceGate, ClosedFormSatisfiesTransmission) {
  for (auto [mp, mm] : {std::pair{2.0, 1.0}, std::pair{1.0, 2.0}}) {
    const MaterialModel m = MaterialModel::plane_jump(mp, mm, 0.6, 1.25, 4.0);
    const ReferenceSolution s = ReferenceSolution::plane_jump(jump_coefficients(mp, mm, 0.6, 4.0), 0.6, 4.0);
    const InterfaceReport r = verify_interface_conditions(s, m, 100);
    EXPECT_LE(r.displacement_jump, 1e-10);
    EXPECT_LE(r.traction_jump, 1e-10);
  }
}

TEST(InterfaceGate, DetectsPerturbedCoefficient) {
  const MaterialModel m = MaterialModel::plane_jump(2.0, 1.0, 0.6, 1.25, 4.0);
  JumpCoefficients c = jump_coefficients(2.0, 1.0, 0.6, 4.0);
  c.a1 += 0.1;
  const InterfaceReport r = verify_interface_conditions(ReferenceSolution::plane_jump(c, 0.6, 4.0), m, 100);
  double expected = 0;
  for (int i = 0; i < 100; ++i) expected = std::max(expected, 0.1 * std::abs(std::sin(4 * pi * (i + 0.5) / 100)));
  EXPECT_NEAR(r.displacement_jump, expected, 1e-3 * expected);
}

TEST(Manufactured, InclusionVanishesWithGradientOnRectangle) {
  const Rect r{0.25, 0.75, 0.25, 0.9};
  const ReferenceSolution s = ReferenceSolution::inclusion(r, 1.0);
  for (int i = 0; i <= 20; ++i) {
    const double t = i / 20.0;
    for (const Point& x : {Point(r.x0 + t * (r.x1 - r.x0), r.y0), Point(r.x0 + t * (r.x1 - r.x0), r.y1),
                           Point(r.x0, r.y0 + t * (r.y1 - r.y0)), Point(r.x1, r.y0 + t * (r.y1 - r.y0))})
      for (bool upper : {true, false}) {
        const DisplacementJet j = s.branch_jet(upper, x);
        EXPECT_LE(j.u.norm(), 1e-15);
        EXPECT_LE(j.grad.norm(), 1e-14);
      }
  }
}
