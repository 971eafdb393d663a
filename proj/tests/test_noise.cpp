#include <cmath>
#include <memory>
#include <numbers>

#include <gtest/gtest.h>

#include "ucfem/noise.hpp"
#include "ucfem/problems.hpp"

using namespace ucfem;

namespace {

std::shared_ptr<const Mesh> convex_mesh(int level) { return mesh_hierarchy(convex_geometry(), 0.25, level).back(); }

}  // namespace

TEST(Noise, HitsTargetNorms) {
  for (int p = 1; p <= 2; ++p)
    for (int theta = 0; theta <= 2; ++theta) {
      const FESpace space(convex_mesh(1), p);
      const Perturbation d = perturb(space, {theta, 0.5, 7});
      const double target = 0.5 * std::pow(space.h(), p - theta);
      EXPECT_NEAR(mass_norm(assemble_omega_mass(space), d.delta_u), target, 1e-12 * target);
      EXPECT_NEAR(mass_norm(assemble_mass(space), d.delta_f), target, 1e-12 * target);
    }
}

TEST(Noise, DataNoiseLivesOnOmega) {
  const FESpace space(convex_mesh(1), 2);
  const Perturbation d = perturb(space, {1, 1.0, 3});
  const auto& dm = space.dofs();
  std::vector<char> in_omega(static_cast<std::size_t>(dm.num_vector()), 0);
  for (Index c : space.mesh().cells_in(Region::omega))
    for (Index s : dm.cell_dofs[static_cast<std::size_t>(c)])
      for (int comp = 0; comp < 2; ++comp) in_omega[static_cast<std::size_t>(dm.vector_dof(comp, s))] = 1;
  for (Index i = 0; i < dm.num_vector(); ++i)
    if (!in_omega[static_cast<std::size_t>(i)]) EXPECT_EQ(d.delta_u(i), 0.0);
}

TEST(Noise, DeterministicPerSeed) {
  const FESpace space(convex_mesh(0), 1);
  const Perturbation a = perturb(space, {0, 1.0, 11});
  const Perturbation b = perturb(space, {0, 1.0, 11});
  const Perturbation c = perturb(space, {0, 1.0, 12});
  EXPECT_EQ(a.delta_u, b.delta_u);
  EXPECT_EQ(a.delta_f, b.delta_f);
  EXPECT_NE(a.delta_f, c.delta_f);
}

TEST(Noise, EmptyOmegaThrows) {
  auto mesh = std::make_shared<const Mesh>(build_fitted_mesh({0, 1}, {0, 1}));
  EXPECT_THROW(perturb(FESpace(mesh, 1), {}), std::invalid_argument);
}

TEST(Noise, NegativeNormOfEigenfunction) {
  // sin(pi x) sin(pi y) has H^-1 norm equal to its L2 norm / (sqrt(2) pi)
  using std::numbers::pi;
  const FESpace space(convex_mesh(3), 2);
  const Vector g = interpolate(space, [](const CellSide&, const Point& x) {
    const double v = std::sin(pi * x.x()) * std::sin(pi * x.y());
    return Eigen::Vector2d(v, 0);
  });
  const double l2 = mass_norm(assemble_mass(space), g);
  EXPECT_NEAR(h_minus_one_norm(space, g), l2 / (std::sqrt(2.0) * pi), 1e-3 * l2);
}

TEST(Noise, NegativeNormBoundedByL2) {
  const FESpace space(convex_mesh(1), 1);
  const Perturbation d = perturb(space, {0, 1.0, 5});
  const double l2 = mass_norm(assemble_mass(space), d.delta_f);
  EXPECT_LE(h_minus_one_norm(space, d.delta_f), l2 / (std::sqrt(2.0) * std::numbers::pi) * (1 + 1e-12));
}
