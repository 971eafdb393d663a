#include "ucfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <utility>

namespace ucfem {

namespace {

constexpr double kGeomTol = 1e-12;

using EdgeKey = std::pair<Index, Index>;

EdgeKey edge_key(Index a, Index b) { return a < b ? EdgeKey{a, b} : EdgeKey{b, a}; }

void validate_breakpoints(const std::vector<double>& bp, const char* axis) {
  if (bp.size() < 2) throw MeshError(std::string("need at least two breakpoints along ") + axis);
  if (bp.front() != 0.0 || bp.back() != 1.0)
    throw MeshError(std::string("breakpoints along ") + axis + " must start at 0 and end at 1");
  for (std::size_t i = 1; i < bp.size(); ++i)
    if (!(bp[i] > bp[i - 1])) throw MeshError(std::string("breakpoints along ") + axis + " not strictly increasing");
}

// Rebuilds facet lists from the cell array. Facets are ordered by vertex pair.
void build_facets(Mesh& mesh) {
  std::map<EdgeKey, std::vector<std::pair<Index, int>>> edges;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto& cell = mesh.cells[static_cast<std::size_t>(c)];
    for (int e = 0; e < 3; ++e) edges[edge_key(cell[e], cell[(e + 1) % 3])].emplace_back(c, e);
  }
  mesh.interior_facets.clear();
  mesh.boundary_facets.clear();
  for (const auto& [key, owners] : edges) {
    if (owners.size() == 1) {
      mesh.boundary_facets.push_back({{key.first, key.second}, owners[0].first});
    } else if (owners.size() == 2) {
      const auto [c0, e0] = owners[0];
      const auto& cell = mesh.cells[static_cast<std::size_t>(c0)];
      const Point d = mesh.vertices[cell[(e0 + 1) % 3]] - mesh.vertices[cell[e0]];
      Point n(d.y(), -d.x());  // outward for a counterclockwise cell
      n.normalize();
      mesh.interior_facets.push_back({{key.first, key.second}, {c0, owners[1].first}, n});
    } else {
      throw MeshError("non-manifold edge shared by more than two cells");
    }
  }
}

double max_diameter(const Mesh& mesh) {
  double h = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) h = std::max(h, mesh.diameter(c));
  return h;
}

// True if the line {coord(axis) = value} passes through the interior of `cell` within (lo, hi).
bool cell_cut_by_segment(const Mesh& mesh, Index cell, int axis, double value, double lo, double hi) {
  const auto& vs = mesh.cells[static_cast<std::size_t>(cell)];
  double cmin = 1e300, cmax = -1e300;
  for (Index v : vs) {
    cmin = std::min(cmin, mesh.vertices[v][axis]);
    cmax = std::max(cmax, mesh.vertices[v][axis]);
  }
  if (!(cmin < value - kGeomTol && cmax > value + kGeomTol)) return false;
  // Cross-section of the triangle with the line.
  double smin = 1e300, smax = -1e300;
  const int other = 1 - axis;
  for (int e = 0; e < 3; ++e) {
    const Point& a = mesh.vertices[vs[e]];
    const Point& b = mesh.vertices[vs[(e + 1) % 3]];
    const double da = a[axis] - value, db = b[axis] - value;
    if (std::abs(da) <= kGeomTol) {
      smin = std::min(smin, a[other]);
      smax = std::max(smax, a[other]);
    }
    if (da * db < 0.0) {
      const double t = da / (da - db);
      const double s = a[other] + t * (b[other] - a[other]);
      smin = std::min(smin, s);
      smax = std::max(smax, s);
    }
  }
  return std::min(smax, hi) - std::max(smin, lo) > kGeomTol;
}

void check_rect_fitted(const Mesh& mesh, const Rect& r) {
  const auto clip = [](double v) { return std::clamp(v, 0.0, 1.0); };
  const double x0 = clip(r.x0), x1 = clip(r.x1), y0 = clip(r.y0), y1 = clip(r.y1);
  struct Edge {
    int axis;
    double value, lo, hi;
  };
  const std::array<Edge, 4> edges{Edge{0, x0, y0, y1}, Edge{0, x1, y0, y1}, Edge{1, y0, x0, x1}, Edge{1, y1, x0, x1}};
  for (const auto& e : edges) {
    if (e.value <= 0.0 || e.value >= 1.0) continue;
    for (Index c = 0; c < mesh.num_cells(); ++c) {
      if (cell_cut_by_segment(mesh, c, e.axis, e.value, e.lo, e.hi))
        throw MeshError("mesh is not fitted to rectangle edge " + std::string(e.axis == 0 ? "x = " : "y = ") +
                        std::to_string(e.value));
    }
  }
}

}  // namespace

std::string to_string(Region r) {
  switch (r) {
    case Region::domain: return "Omega";
    case Region::omega: return "omega";
    case Region::B: return "B";
    case Region::B_minus: return "B_minus";
    case Region::B_plus: return "B_plus";
    case Region::Omega_plus: return "Omega_plus";
    case Region::Omega_minus: return "Omega_minus";
  }
  return "?";
}

bool RegionSpec::contains(const Point& p) const {
  const bool in = std::any_of(include.begin(), include.end(), [&](const Rect& r) { return r.contains(p); });
  if (!in) return false;
  return std::none_of(exclude.begin(), exclude.end(), [&](const Rect& r) { return r.contains(p); });
}

bool Mesh::region_present(Region r) const {
  for (Index c = 0; c < num_cells(); ++c)
    if (has_tag(c, r)) return true;
  return false;
}

std::vector<Index> Mesh::cells_in(Region r) const {
  std::vector<Index> out;
  for (Index c = 0; c < num_cells(); ++c)
    if (has_tag(c, r)) out.push_back(c);
  return out;
}

Point Mesh::centroid(Index cell) const {
  const auto& v = cells[static_cast<std::size_t>(cell)];
  return (vertices[v[0]] + vertices[v[1]] + vertices[v[2]]) / 3.0;
}

double Mesh::signed_area(Index cell) const {
  const auto& v = cells[static_cast<std::size_t>(cell)];
  const Point a = vertices[v[1]] - vertices[v[0]];
  const Point b = vertices[v[2]] - vertices[v[0]];
  return 0.5 * (a.x() * b.y() - a.y() * b.x());
}

double Mesh::diameter(Index cell) const {
  const auto& v = cells[static_cast<std::size_t>(cell)];
  double d = 0.0;
  for (int e = 0; e < 3; ++e) d = std::max(d, (vertices[v[(e + 1) % 3]] - vertices[v[e]]).norm());
  return d;
}

Mesh build_fitted_mesh(const std::vector<double>& bx, const std::vector<double>& by) {
  validate_breakpoints(bx, "x");
  validate_breakpoints(by, "y");
  Mesh mesh;
  const auto nx = static_cast<Index>(bx.size());
  const auto ny = static_cast<Index>(by.size());
  mesh.vertices.reserve(static_cast<std::size_t>(nx * ny));
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i) mesh.vertices.emplace_back(bx[i], by[j]);
  const auto vid = [nx](Index i, Index j) { return j * nx + i; };
  for (Index j = 0; j + 1 < ny; ++j) {
    for (Index i = 0; i + 1 < nx; ++i) {
      const Index a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh.cells.push_back({a, b, c});
      mesh.cells.push_back({a, c, d});
    }
  }
  mesh.cell_tags.assign(mesh.cells.size(), std::uint8_t{1} << static_cast<unsigned>(Region::domain));
  build_facets(mesh);
  mesh.h = max_diameter(mesh);
  mesh.refinement_level = 0;
  return mesh;
}

std::vector<double> fitted_breakpoints(std::vector<double> required, double max_spacing) {
  if (!(max_spacing > 0.0)) throw MeshError("max_spacing must be positive");
  std::sort(required.begin(), required.end());
  required.erase(std::unique(required.begin(), required.end()), required.end());
  if (required.empty() || required.front() != 0.0 || required.back() != 1.0)
    throw MeshError("required coordinates must span [0, 1]");
  std::vector<double> out{0.0};
  for (std::size_t i = 1; i < required.size(); ++i) {
    const double a = required[i - 1], b = required[i];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_spacing - 1e-9)));
    for (int s = 1; s < n; ++s) out.push_back(a + (b - a) * s / n);
    out.push_back(b);
  }
  return out;
}

Mesh refine_uniform(const Mesh& mesh, const GeometrySpec& geometry) {
  Mesh fine;
  fine.vertices = mesh.vertices;
  std::map<EdgeKey, Index> midpoints;
  const auto midpoint = [&](Index a, Index b) {
    const auto [it, inserted] = midpoints.try_emplace(edge_key(a, b), fine.num_vertices());
    if (inserted) fine.vertices.push_back(0.5 * (mesh.vertices[a] + mesh.vertices[b]));
    return it->second;
  };
  fine.cells.reserve(mesh.cells.size() * 4);
  fine.cell_tags.reserve(mesh.cells.size() * 4);
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) {
    const auto [v0, v1, v2] = mesh.cells[c];
    const Index m01 = midpoint(v0, v1), m12 = midpoint(v1, v2), m20 = midpoint(v2, v0);
    fine.cells.push_back({v0, m01, m20});
    fine.cells.push_back({m01, v1, m12});
    fine.cells.push_back({m20, m12, v2});
    fine.cells.push_back({m01, m12, m20});
    for (int k = 0; k < 4; ++k) fine.cell_tags.push_back(mesh.cell_tags[c]);
  }
  build_facets(fine);
  fine.h = 0.5 * mesh.h;
  fine.refinement_level = mesh.refinement_level + 1;
  if (!geometry.empty()) return tag_regions(std::move(fine), geometry);
  return fine;
}

Mesh tag_regions(Mesh mesh, const GeometrySpec& geometry) {
  for (const auto& [region, spec] : geometry) {
    for (const auto& r : spec.include) check_rect_fitted(mesh, r);
    for (const auto& r : spec.exclude) check_rect_fitted(mesh, r);
  }
  mesh.cell_tags.assign(mesh.cells.size(), 0);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const Point x = mesh.centroid(c);
    std::uint8_t mask = std::uint8_t{1} << static_cast<unsigned>(Region::domain);
    for (const auto& [region, spec] : geometry)
      if (spec.contains(x)) mask |= std::uint8_t{1} << static_cast<unsigned>(region);
    mesh.cell_tags[static_cast<std::size_t>(c)] = mask;
  }
  return mesh;
}

void write_mesh_text(std::ostream& os, const Mesh& mesh) {
  const auto old_precision = os.precision(17);
  for (const auto& v : mesh.vertices) os << "v " << v.x() << ' ' << v.y() << '\n';
  for (const auto& c : mesh.cells) os << "c " << c[0] << ' ' << c[1] << ' ' << c[2] << '\n';
  for (std::size_t c = 0; c < mesh.cells.size(); ++c) os << "t " << c << ' ' << int(mesh.cell_tags[c]) << '\n';
  os.precision(old_precision);
}

}  // namespace ucfem
