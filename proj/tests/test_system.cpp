#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ucfem/problems.hpp"
#include "ucfem/system.hpp"

using namespace ucfem;

namespace {

struct Problem {
  FESpace space;
  MaterialModel material;
  ReferenceSolution solution;
  StabilizationParams params;
};

Problem convex_setup(int p, int level) {
  return {FESpace(mesh_hierarchy(convex_geometry(), 0.25, level).back(), p), MaterialModel::smooth(1.0),
          ReferenceSolution::oscillatory(1.0), StabilizationParams::defaults(p)};
}

Vector random_vector(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1, 1);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = u(rng);
  return v;
}

}  // namespace

TEST(System, DimensionsAndSymmetry) {
  const Problem s = convex_setup(2, 1);
  const SaddleSystem sys = build_system(s.space, s.material, s.params, problem_data(s.material, s.solution), {});
  const Index n = s.space.dofs().num_vector();
  const auto nb = static_cast<Index>(s.space.dofs().boundary_vector_dofs().size());
  EXPECT_EQ(sys.num_primal(), n);
  EXPECT_EQ(sys.num_dual(), n - nb);
  EXPECT_EQ(sys.matrix().rows(), 2 * n - nb);
  EXPECT_LE((sys.matrix() - SparseMatrix(sys.matrix().transpose())).cwiseAbs().sum(), 1e-12 * sys.matrix().cwiseAbs().sum());
}

TEST(System, WellPosedFixesBoundary) {
  const Problem s = convex_setup(1, 1);
  const SaddleSystem sys = build_system(s.space, s.material, s.params, problem_data(s.material, s.solution),
                                        {ProblemKind::well_posed_dirichlet});
  const auto nb = static_cast<Index>(s.space.dofs().boundary_vector_dofs().size());
  EXPECT_EQ(sys.num_primal(), s.space.dofs().num_vector() - nb);
}

TEST(System, InfSupIdentityMatchesIndependentNorms) {
  std::mt19937_64 rng(1);
  for (int p = 1; p <= 3; ++p) {
    const Problem s = convex_setup(p, 0);
    const SaddleSystem sys = build_system(s.space, s.material, s.params, problem_data(s.material, s.solution), {});
    SparseMatrix energy = assemble_omega_mass(s.space) + s.params.gamma_gls * assemble_gls(s.space, s.material) +
                          assemble_tikhonov(s.space, s.params.alpha);
    for (int j = 1; j <= p; ++j)
      if (s.params.gamma[static_cast<std::size_t>(j - 1)] > 0)
        energy += s.params.gamma[static_cast<std::size_t>(j - 1)] * assemble_jump(s.space, s.material, j);
    const SparseMatrix lap = assemble_dual_laplacian(s.space);
    const Index n = s.space.dofs().num_vector();
    for (int trial = 0; trial < 5; ++trial) {
      const Vector u = random_vector(n, rng);
      Vector z = random_vector(n, rng);
      for (Index i : s.space.dofs().boundary_vector_dofs()) z(i) = 0;
      const auto [lhs, rhs] = sys.inf_sup_identity(u, z);
      const double independent = u.dot(energy * u) + z.dot(lap * z);
      EXPECT_NEAR(rhs, independent, 1e-12 * (1 + independent));
      EXPECT_NEAR(lhs, rhs, 1e-10 * (1 + std::abs(rhs)));
    }
  }
}

TEST(System, ZeroRightHandSideGivesZero) {
  const Problem s = convex_setup(1, 1);
  SaddleSystem sys = build_system(s.space, s.material, s.params, problem_data(s.material, s.solution), {});
  const Vector x = sys.solve_reduced(Vector::Zero(sys.matrix().rows()));
  EXPECT_EQ(x.cwiseAbs().maxCoeff(), 0.0);
}

TEST(System, SolveReachesSmallResidual) {
  const Problem s = convex_setup(2, 1);
  SaddleSystem sys = build_system(s.space, s.material, s.params, problem_data(s.material, s.solution), {});
  const Solution sol = sys.solve();
  EXPECT_LE(sys.last_residual(), 1e-8);
  EXPECT_EQ(sol.u.size(), s.space.dofs().num_vector());
  for (Index i : s.space.dofs().boundary_vector_dofs()) EXPECT_EQ(sol.z(i), 0.0);
  // reduce and expand are inverse on the free sets
  const Vector x = sys.reduce(sol.u, sol.z);
  const Solution back = sys.expand(x);
  EXPECT_EQ(back.u, sol.u);
  EXPECT_EQ(back.z, sol.z);
}

TEST(System, RejectsInconsistentRequests) {
  const Problem s = convex_setup(1, 0);
  ProblemData data = problem_data(s.material, s.solution);
  EXPECT_THROW(build_system(s.space, s.material, s.params, data, {ProblemKind::ill_posed, DataKind::perturbed}),
               std::invalid_argument);
  data.divergence = nullptr;
  EXPECT_THROW(build_system(s.space, s.material, s.params, data, {ProblemKind::ill_posed, DataKind::unperturbed, true}),
               std::invalid_argument);
  data.dirichlet = nullptr;
  EXPECT_THROW(build_system(s.space, s.material, s.params, data, {ProblemKind::well_posed_dirichlet}),
               std::invalid_argument);
  StabilizationParams bad = s.params;
  bad.alpha = 0;
  EXPECT_THROW(build_system(s.space, s.material, bad, problem_data(s.material, s.solution), {}), AssemblyError);
}

TEST(Condition, DiagonalMatrix) {
  const Index n = 50;
  SparseMatrix d(n, n);
  for (Index i = 0; i < n; ++i) d.insert(i, i) = 1.0 + static_cast<double>(i);
  const ConditionEstimate c = condition_estimate(d, 2000, 1e-10);
  EXPECT_NEAR(c.sigma_max, 50.0, 1e-4);
  EXPECT_NEAR(c.sigma_min, 1.0, 1e-4);
  EXPECT_NEAR(c.kappa, 50.0, 1e-3);
  EXPECT_TRUE(c.converged);
}

TEST(Condition, NonSymmetricMatrix) {
  // [[1, 10], [0, 1]]: smax + smin = sqrt(104), smax - smin = 10, smax smin = 1
  SparseMatrix a(2, 2);
  a.insert(0, 0) = 1;
  a.insert(0, 1) = 10;
  a.insert(1, 1) = 1;
  const ConditionEstimate c = condition_estimate(a, 2000, 1e-12);
  const double smax = (std::sqrt(104.0) + 10) / 2;
  EXPECT_NEAR(c.kappa, smax * smax, 1e-6 * smax * smax);
}

TEST(Condition, SaddleSystemAgreesWithGeneric) {
  const Problem s = convex_setup(1, 0);
  SaddleSystem sys = build_system(s.space, s.material, s.params, problem_data(s.material, s.solution), {});
  const double generic = condition_estimate(sys.matrix(), 2000, 1e-8).kappa;
  const double own = sys.condition_estimate(2000, 1e-8).kappa;
  EXPECT_NEAR(own, generic, 1e-3 * generic);
}
