#include "ucfem/problems.hpp"

namespace ucfem {

Geometry convex_geometry() {
  Geometry g;
  g.kind = GeometryKind::convex;
  g.regions[Region::omega] = {{{0, 1, 0, 1}}, {{0.1, 0.9, 0.25, 1}}};
  g.regions[Region::B] = {{{0, 1, 0, 1}}, {{0.1, 0.9, 0.95, 1}}};
  g.breaks_x = {0, 0.1, 0.9, 1};
  g.breaks_y = {0, 0.25, 0.95, 1};
  g.error_regions = {Region::B};
  return g;
}

Geometry split_geometry(double xi) {
  if (!(xi > 0.25 && xi < 0.95)) throw std::invalid_argument("split height must lie in (0.25, 0.95)");
  Geometry g;
  g.kind = GeometryKind::split;
  g.regions[Region::omega] = {{{0, 0.1, 0, xi}, {0.9, 1, 0, xi}, {0.1, 0.9, 0, 0.25}}, {}};
  g.regions[Region::B_minus] = {{{0, 1, 0, xi}}, {}};
  g.regions[Region::B_plus] = {{{0.1, 0.9, xi, 0.95}}, {}};
  g.regions[Region::B] = {{{0, 1, 0, xi}, {0.1, 0.9, xi, 0.95}}, {}};
  g.breaks_x = {0, 0.1, 0.9, 1};
  g.breaks_y = {0, 0.25, xi, 0.95, 1};
  g.error_regions = {Region::B_minus, Region::B_plus};
  return g;
}

Rect inclusion_rect() { return {0.25, 0.75, 0.25, 0.9}; }

Geometry inclusion_geometry() {
  Geometry g;
  g.kind = GeometryKind::inclusion;
  g.regions[Region::omega] = {{{0, 1, 0, 0.25}}, {}};
  g.regions[Region::B_minus] = {{{0.25, 0.75, 0.25, 0.6}}, {}};
  g.regions[Region::B_plus] = {{{0.25, 0.75, 0.6, 0.9}}, {}};
  g.regions[Region::B] = {{inclusion_rect()}, {}};
  g.breaks_x = {0, 0.25, 0.75, 1};
  g.breaks_y = {0, 0.25, 0.6, 0.9, 1};
  g.error_regions = {Region::B_minus, Region::B_plus};
  return g;
}

std::vector<std::shared_ptr<const Mesh>> mesh_hierarchy(const Geometry& geometry, double spacing, int max_level) {
  std::vector<std::shared_ptr<const Mesh>> out;
  Mesh m = tag_regions(build_fitted_mesh(fitted_breakpoints(geometry.breaks_x, spacing),
                                         fitted_breakpoints(geometry.breaks_y, spacing)),
                       geometry.regions);
  out.push_back(std::make_shared<const Mesh>(m));
  for (int l = 1; l <= max_level; ++l) {
    m = refine_uniform(m, geometry.regions);
    out.push_back(std::make_shared<const Mesh>(m));
  }
  return out;
}

ProblemData problem_data(const MaterialModel& material, const ReferenceSolution& solution) {
  ProblemData d;
  d.f = [material, solution](const QuadPoint& q) { return solution.f(material, q.side, q.x); };
  d.u_omega = [solution](const QuadPoint& q) { return solution.u(q.side, q.x); };
  d.dirichlet = [solution](const CellSide& s, const Point& x) { return solution.u(s, x); };
  d.divergence = [solution](const QuadPoint& q) { return solution.divergence(q.side, q.x); };
  return d;
}

CaseResult run_case(const std::shared_ptr<const Mesh>& mesh, int p, const CaseSpec& spec,
                    const std::vector<Region>& error_regions) {
  const FESpace space(mesh, p);
  ProblemData data = problem_data(spec.material, spec.solution);
  SystemOptions options = spec.options;
  if (spec.noise) {
    data.perturbation = perturb(space, *spec.noise);
    options.data = DataKind::perturbed;
  }
  SaddleSystem sys = build_system(space, spec.material, spec.params, data, options);
  const Solution sol = sys.solve();

  CaseResult r;
  r.residual = sys.last_residual();
  r.row.level = mesh->refinement_level;
  r.row.h = mesh->h;
  r.row.dofs = sys.matrix().rows();
  for (Region reg : error_regions) {
    r.row.errors.push_back(region_l2_error(space, sol.u, spec.solution, reg));
    if (spec.h1_errors) r.h1_errors.push_back(region_h1_seminorm_error(space, sol.u, spec.solution, reg));
  }
  if (spec.weighted_k)
    r.row.weighted = weighted_error(space, sol.u, spec.solution, spec.weighted_region, *spec.weighted_k);
  if (spec.estimate_condition) r.row.kappa = sys.condition_estimate().kappa;
  return r;
}

}  // namespace ucfem
