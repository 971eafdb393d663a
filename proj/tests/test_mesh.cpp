#include <algorithm>
#include <cmath>
#include <set>

#include <gtest/gtest.h>

#include "ucfem/mesh.hpp"

using namespace ucfem;

namespace {

double total_area(const Mesh& m) {
  double a = 0;
  for (Index c = 0; c < m.num_cells(); ++c) a += m.signed_area(c);
  return a;
}

}  // namespace

TEST(Mesh, SingleSquareHasTwoCells) {
  const Mesh m = build_fitted_mesh({0, 1}, {0, 1});
  EXPECT_EQ(m.num_vertices(), 4);
  EXPECT_EQ(m.num_cells(), 2);
  EXPECT_EQ(m.interior_facets.size(), 1u);
  EXPECT_EQ(m.boundary_facets.size(), 4u);
  EXPECT_DOUBLE_EQ(m.h, std::sqrt(2.0));
}

TEST(Mesh, TwoRefinementsOfTwoCells) {
  Mesh m = build_fitted_mesh({0, 1}, {0, 1});
  m = refine_uniform(refine_uniform(m));
  // 4 x 4 vertex intervals per side after two halvings
  EXPECT_EQ(m.num_vertices(), 25);
  EXPECT_EQ(m.num_cells(), 32);
  EXPECT_EQ(m.refinement_level, 2);
  EXPECT_DOUBLE_EQ(m.h, std::sqrt(2.0) / 4);
}

TEST(Mesh, EulerRelationAndOrientation) {
  Mesh m = build_fitted_mesh(fitted_breakpoints({0, 0.1, 0.9, 1}, 0.2), fitted_breakpoints({0, 0.25, 0.95, 1}, 0.2));
  for (int l = 0; l < 3; ++l) {
    const Index edges = static_cast<Index>(m.interior_facets.size() + m.boundary_facets.size());
    EXPECT_EQ(m.num_vertices() - edges + m.num_cells(), 1);
    for (Index c = 0; c < m.num_cells(); ++c) EXPECT_GT(m.signed_area(c), 0.0);
    EXPECT_NEAR(total_area(m), 1.0, 1e-13);
    m = refine_uniform(m);
  }
}

TEST(Mesh, RefinementHalvesH) {
  const Mesh m0 = build_fitted_mesh(fitted_breakpoints({0, 0.25, 1}, 0.3), fitted_breakpoints({0, 1}, 0.3));
  const Mesh m1 = refine_uniform(m0);
  EXPECT_DOUBLE_EQ(m1.h, m0.h / 2);
  double hmax = 0;
  for (Index c = 0; c < m1.num_cells(); ++c) hmax = std::max(hmax, m1.diameter(c));
  EXPECT_NEAR(hmax, m1.h, 1e-14);
}

TEST(Mesh, InteriorFacetNormalPointsIntoSecondCell) {
  const Mesh m = refine_uniform(build_fitted_mesh({0, 0.5, 1}, {0, 1}));
  for (const auto& f : m.interior_facets) {
    const Point d = m.centroid(f.cells[1]) - m.centroid(f.cells[0]);
    EXPECT_GT(d.dot(f.normal), 0.0);
    EXPECT_NEAR(f.normal.norm(), 1.0, 1e-14);
    const Point e = m.vertices[static_cast<std::size_t>(f.vertices[1])] - m.vertices[static_cast<std::size_t>(f.vertices[0])];
    EXPECT_NEAR(e.dot(f.normal), 0.0, 1e-14);
  }
}

TEST(Mesh, BreakpointsKeepRequiredCoordinates) {
  const auto b = fitted_breakpoints({0, 0.1, 0.9, 1}, 0.1);
  EXPECT_EQ(b.size(), 11u);
  EXPECT_NE(std::find(b.begin(), b.end(), 0.9), b.end());
  EXPECT_THROW(fitted_breakpoints({0.1, 1}, 0.1), MeshError);
  EXPECT_THROW(fitted_breakpoints({0, 1}, 0.0), MeshError);
}

TEST(Mesh, RejectsBadBreakpoints) {
  EXPECT_THROW(build_fitted_mesh({0, 0.5, 0.4, 1}, {0, 1}), MeshError);
  EXPECT_THROW(build_fitted_mesh({0, 0.5}, {0, 1}), MeshError);
}

TEST(Mesh, TagsFollowCentroids) {
  GeometrySpec g;
  g[Region::omega] = {{{0, 1, 0, 0.25}}, {}};
  g[Region::B] = {{{0, 1, 0, 1}}, {{0.25, 0.75, 0.5, 1}}};
  const Mesh m = tag_regions(build_fitted_mesh({0, 0.25, 0.75, 1}, {0, 0.25, 0.5, 1}), g);
  double a_omega = 0, a_b = 0;
  for (Index c = 0; c < m.num_cells(); ++c) {
    EXPECT_TRUE(m.has_tag(c, Region::domain));
    if (m.has_tag(c, Region::omega)) a_omega += m.signed_area(c);
    if (m.has_tag(c, Region::B)) a_b += m.signed_area(c);
  }
  EXPECT_NEAR(a_omega, 0.25, 1e-14);
  EXPECT_NEAR(a_b, 1 - 0.25, 1e-14);
  EXPECT_FALSE(m.region_present(Region::B_plus));
}

TEST(Mesh, RefinedTagsPreserveAreas) {
  GeometrySpec g;
  g[Region::omega] = {{{0, 0.1, 0, 0.6}, {0.9, 1, 0, 0.6}, {0.1, 0.9, 0, 0.25}}, {}};
  Mesh m = tag_regions(build_fitted_mesh(fitted_breakpoints({0, 0.1, 0.9, 1}, 0.2),
                                         fitted_breakpoints({0, 0.25, 0.6, 1}, 0.2)),
                       g);
  const double expected = 2 * 0.1 * 0.6 + 0.8 * 0.25;
  for (int l = 0; l < 3; ++l) {
    double a = 0;
    for (Index c : m.cells_in(Region::omega)) a += m.signed_area(c);
    EXPECT_NEAR(a, expected, 1e-13);
    m = refine_uniform(m, g);
  }
}

TEST(Mesh, UnfittedRegionThrows) {
  GeometrySpec g;
  g[Region::omega] = {{{0, 0.3, 0, 1}}, {}};
  EXPECT_THROW(tag_regions(build_fitted_mesh({0, 0.5, 1}, {0, 1}), g), MeshError);
}

TEST(Mesh, FacetsCoverEachCellThreeTimes) {
  const Mesh m = refine_uniform(build_fitted_mesh({0, 0.5, 1}, {0, 0.5, 1}));
  std::vector<int> count(static_cast<std::size_t>(m.num_cells()), 0);
  for (const auto& f : m.interior_facets) {
    ++count[static_cast<std::size_t>(f.cells[0])];
    ++count[static_cast<std::size_t>(f.cells[1])];
  }
  for (const auto& f : m.boundary_facets) ++count[static_cast<std::size_t>(f.cell)];
  for (int c : count) EXPECT_EQ(c, 3);
}
