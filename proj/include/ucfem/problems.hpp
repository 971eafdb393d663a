#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "ucfem/metrics.hpp"
#include "ucfem/noise.hpp"
#include "ucfem/system.hpp"

namespace ucfem {

enum class GeometryKind { convex, split, inclusion };

/// Region layout plus the coordinates every mesh of it must resolve.
struct Geometry {
  GeometryKind kind = GeometryKind::convex;
  GeometrySpec regions;
  std::vector<double> breaks_x;
  std::vector<double> breaks_y;
  std::vector<Region> error_regions;
};

/// omega = square minus [0.1,0.9]x[0.25,1], B = square minus [0.1,0.9]x[0.95,1].
Geometry convex_geometry();
/// Data on the sides and bottom up to height xi; B- below xi, B+ = [0.1,0.9]x[xi,0.95].
Geometry split_geometry(double xi);
/// Data on [0,1]x[0,0.25]; B = [0.25,0.75]x[0.25,0.9] split at y = 0.6.
Geometry inclusion_geometry();
Rect inclusion_rect();

/// Meshes for refinement levels 0..max_level from a fitted base mesh of the given spacing.
std::vector<std::shared_ptr<const Mesh>> mesh_hierarchy(const Geometry& geometry, double spacing, int max_level);

/// One solve of the stabilized problem.
struct CaseSpec {
  CaseSpec(MaterialModel m, ReferenceSolution u, StabilizationParams s, SystemOptions o = {})
      : material(std::move(m)), solution(std::move(u)), params(std::move(s)), options(o) {}

  MaterialModel material;
  ReferenceSolution solution;
  StabilizationParams params;
  SystemOptions options;
  std::optional<NoiseSpec> noise;
  bool estimate_condition = false;
  std::optional<double> weighted_k;  // weighted error over weighted_region when set
  Region weighted_region = Region::B;
  bool h1_errors = false;            // also record gradient errors over error regions
};

struct CaseResult {
  ConvergenceRow row;
  std::vector<double> h1_errors;  // per error region, if requested
  double residual = 0.0;
};

ProblemData problem_data(const MaterialModel& material, const ReferenceSolution& solution);

CaseResult run_case(const std::shared_ptr<const Mesh>& mesh, int p, const CaseSpec& spec,
                    const std::vector<Region>& error_regions);

}  // namespace ucfem
