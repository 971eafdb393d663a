#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace ucfem {

using Index = std::int64_t;
using Point = Eigen::Vector2d;

/// Thrown when a mesh cannot be built or a geometry is not resolved by the mesh.
class MeshError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Named cell sets used by the experiments. `domain` is always the whole square.
enum class Region : std::uint8_t { domain, omega, B, B_minus, B_plus, Omega_plus, Omega_minus };

inline constexpr std::array<Region, 7> kAllRegions{Region::domain,  Region::omega,     Region::B,
                                                   Region::B_minus, Region::B_plus,    Region::Omega_plus,
                                                   Region::Omega_minus};

std::string to_string(Region r);

/// Closed axis-aligned rectangle [x0,x1] x [y0,y1].
struct Rect {
  double x0, x1, y0, y1;

  bool contains(const Point& p) const { return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1; }
  double area() const { return (x1 - x0) * (y1 - y0); }
};

/// A region is a union of rectangles minus a union of rectangles.
struct RegionSpec {
  std::vector<Rect> include;
  std::vector<Rect> exclude;

  bool contains(const Point& p) const;
};

using GeometrySpec = std::map<Region, RegionSpec>;

struct InteriorFacet {
  std::array<Index, 2> vertices;
  std::array<Index, 2> cells;
  Point normal;  // unit normal pointing out of cells[0] into cells[1]
};

struct BoundaryFacet {
  std::array<Index, 2> vertices;
  Index cell;
};

/// Conforming triangulation of the unit square. Cells are counterclockwise.
/// Treated as immutable once built; refinement returns a new mesh.
struct Mesh {
  std::vector<Point> vertices;
  std::vector<std::array<Index, 3>> cells;
  std::vector<InteriorFacet> interior_facets;
  std::vector<BoundaryFacet> boundary_facets;
  std::vector<std::uint8_t> cell_tags;  // bitmask over Region
  double h = 0.0;                       // max cell diameter
  int refinement_level = 0;

  Index num_cells() const { return static_cast<Index>(cells.size()); }
  Index num_vertices() const { return static_cast<Index>(vertices.size()); }

  bool has_tag(Index cell, Region r) const {
    return (cell_tags[static_cast<std::size_t>(cell)] >> static_cast<unsigned>(r)) & 1U;
  }
  /// True if at least one cell carries the tag.
  bool region_present(Region r) const;
  std::vector<Index> cells_in(Region r) const;

  Point centroid(Index cell) const;
  double signed_area(Index cell) const;
  double diameter(Index cell) const;
};

/// Tensor grid of rectangles with the given breakpoints, each split along its
/// lower-left to upper-right diagonal. Only the `domain` tag is set.
Mesh build_fitted_mesh(const std::vector<double>& breakpoints_x, const std::vector<double>& breakpoints_y);

/// Subdivides every interval between consecutive required coordinates into
/// equal pieces no longer than `max_spacing`. Required coordinates must include 0 and 1.
std::vector<double> fitted_breakpoints(std::vector<double> required, double max_spacing);

/// Red refinement: each triangle is split into four congruent children.
/// Region tags are re-evaluated for the children using `geometry`.
Mesh refine_uniform(const Mesh& mesh, const GeometrySpec& geometry = {});

/// Sets membership flags by centroid containment. Throws MeshError if a
/// rectangle edge cuts through a cell.
Mesh tag_regions(Mesh mesh, const GeometrySpec& geometry);

/// Plain-text dump: "v x y", "c i j k", "t cell mask" records, one per line.
void write_mesh_text(std::ostream& os, const Mesh& mesh);

}  // namespace ucfem
