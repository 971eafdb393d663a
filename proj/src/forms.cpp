#include "ucfem/forms.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace ucfem {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

// Coefficients of (c0 d_xi + c1 d_eta)-products, indexed by the power of d_eta.
std::vector<double> multiply_linear(const std::vector<double>& poly, double c0, double c1) {
  std::vector<double> out(poly.size() + 1, 0.0);
  for (std::size_t k = 0; k < poly.size(); ++k) {
    out[k] += c0 * poly[k];
    out[k + 1] += c1 * poly[k];
  }
  return out;
}

// Maps distinct reference partials of order m to distinct physical partials.
Eigen::MatrixXd chain_rule_matrix(const Eigen::Matrix2d& inv, int m) {
  Eigen::MatrixXd t(m + 1, m + 1);
  for (int b = 0; b <= m; ++b) {
    std::vector<double> poly{1.0};
    for (int s = 0; s < m - b; ++s) poly = multiply_linear(poly, inv(0, 0), inv(1, 0));
    for (int s = 0; s < b; ++s) poly = multiply_linear(poly, inv(0, 1), inv(1, 1));
    for (int bp = 0; bp <= m; ++bp) t(b, bp) = poly[static_cast<std::size_t>(bp)];
  }
  return t;
}

Eigen::MatrixXd expand_symmetric(const Eigen::MatrixXd& distinct, int m) {
  const int full = 1 << m;
  Eigen::MatrixXd out(distinct.rows(), full);
  for (int r = 0; r < full; ++r) out.col(r) = distinct.col(std::popcount(static_cast<unsigned>(r)));
  return out;
}

std::vector<Eigen::MatrixXd> to_physical(const std::vector<Eigen::MatrixXd>& reference, const CellGeometry& g,
                                         int max_order, Eigen::Index nb) {
  std::vector<Eigen::MatrixXd> out;
  out.reserve(static_cast<std::size_t>(max_order + 1));
  for (int m = 0; m <= max_order; ++m) {
    if (m >= static_cast<int>(reference.size())) {
      out.push_back(Eigen::MatrixXd::Zero(nb, 1 << m));
      continue;
    }
    const Eigen::MatrixXd phys = reference[static_cast<std::size_t>(m)] * chain_rule_matrix(g.inverse, m).transpose();
    out.push_back(expand_symmetric(phys, m));
  }
  return out;
}

double coefficient_derivative(const ScalarJet& jet, const int* dirs, int count) {
  switch (count) {
    case 0: return jet.value;
    case 1: return jet.grad(dirs[0]);
    case 2: return jet.hess(dirs[0], dirs[1]);
    default: throw AssemblyError("coefficient derivatives above second order are not available");
  }
}

CellSide side_of(const Mesh& mesh, Index cell) { return CellSide{mesh.centroid(cell)}; }

// Global vector dof of local row c * nb + i.
void local_to_global(const FESpace& space, Index cell, std::vector<Index>& out) {
  const auto& dm = space.dofs();
  const auto& local = dm.cell_dofs[static_cast<std::size_t>(cell)];
  const auto nb = local.size();
  out.resize(2 * nb);
  for (int c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < nb; ++i) out[c * nb + i] = dm.vector_dof(c, local[i]);
}

void scatter(Triplets& triplets, const std::vector<Index>& rows, const Eigen::MatrixXd& local) {
  for (Eigen::Index i = 0; i < local.rows(); ++i)
    for (Eigen::Index j = 0; j < local.cols(); ++j)
      if (local(i, j) != 0.0) triplets.emplace_back(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)], local(i, j));
}

SparseMatrix from_triplets(const FESpace& space, const Triplets& triplets) {
  const Index n = space.dofs().num_vector();
  SparseMatrix a(n, n);
  a.setFromTriplets(triplets.begin(), triplets.end());
  a.makeCompressed();
  return a;
}

// Loops over `cells`, calling kernel(qp, derivatives, weight, local_matrix).
template <class Kernel>
SparseMatrix assemble_cells(const FESpace& space, const std::vector<Index>& cells, int max_order, Kernel&& kernel) {
  const auto& rule = space.cell_rule();
  const auto nb = static_cast<Eigen::Index>(space.element().size());
  Triplets triplets;
  triplets.reserve(cells.size() * static_cast<std::size_t>(4 * nb * nb));
  std::vector<Index> rows;
  Eigen::MatrixXd local(2 * nb, 2 * nb);
  for (Index cell : cells) {
    const CellGeometry g = space.geometry(cell);
    const QuadPoint base{cell, side_of(space.mesh(), cell), Point::Zero(), Point::Zero()};
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      QuadPoint qp = base;
      qp.ref = rule.points[q];
      qp.x = g.to_physical(qp.ref);
      const auto d = space.physical_derivatives(g, qp.ref, max_order);
      kernel(qp, d, rule.weights[q] * std::abs(g.det), local);
    }
    local_to_global(space, cell, rows);
    scatter(triplets, rows, local);
  }
  return from_triplets(space, triplets);
}

// Loops over `cells`, calling kernel(qp, derivatives, weight, local_vector).
template <class Kernel>
Vector assemble_cell_vector(const FESpace& space, const std::vector<Index>& cells, int max_order, Kernel&& kernel) {
  const auto& rule = space.cell_rule();
  const auto nb = static_cast<Eigen::Index>(space.element().size());
  Vector out = Vector::Zero(space.dofs().num_vector());
  std::vector<Index> rows;
  Eigen::VectorXd local(2 * nb);
  for (Index cell : cells) {
    const CellGeometry g = space.geometry(cell);
    const QuadPoint base{cell, side_of(space.mesh(), cell), Point::Zero(), Point::Zero()};
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      QuadPoint qp = base;
      qp.ref = rule.points[q];
      qp.x = g.to_physical(qp.ref);
      const auto d = space.physical_derivatives(g, qp.ref, max_order);
      kernel(qp, d, rule.weights[q] * std::abs(g.det), local);
    }
    local_to_global(space, cell, rows);
    for (Eigen::Index i = 0; i < local.size(); ++i) out(rows[static_cast<std::size_t>(i)]) += local(i);
  }
  return out;
}

std::vector<Index> all_cells(const Mesh& mesh) {
  std::vector<Index> cells(static_cast<std::size_t>(mesh.num_cells()));
  for (Index c = 0; c < mesh.num_cells(); ++c) cells[static_cast<std::size_t>(c)] = c;
  return cells;
}

// Block-diagonal vector mass kernel.
void add_mass(const std::vector<Eigen::MatrixXd>& d, double w, Eigen::MatrixXd& local) {
  const Eigen::Index nb = d[0].rows();
  const Eigen::MatrixXd m = w * d[0] * d[0].transpose();
  local.topLeftCorner(nb, nb) += m;
  local.bottomRightCorner(nb, nb) += m;
}

}  // namespace

std::vector<Index> DofMap::boundary_vector_dofs() const {
  std::vector<Index> out;
  for (int c = 0; c < 2; ++c)
    for (Index s = 0; s < num_scalar; ++s)
      if (on_boundary[static_cast<std::size_t>(s)]) out.push_back(vector_dof(c, s));
  return out;
}

DofMap build_dofmap(const Mesh& mesh, const ReferenceElement& element) {
  DofMap dm;
  const int p = element.degree();
  dm.degree = p;
  const Index nv = mesh.num_vertices();
  Index next = nv;
  std::map<std::pair<Index, Index>, Index> edge_first;  // first interior dof of each edge, ordered min -> max vertex
  for (const auto& cell : mesh.cells) {
    for (int e = 0; e < 3; ++e) {
      const Index a = cell[e], b = cell[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      if (edge_first.try_emplace({key.first, key.second}, next).second) next += p - 1;
    }
  }
  const int interior = (p - 1) * (p - 2) / 2;
  dm.cell_dofs.reserve(mesh.cells.size());
  for (const auto& cell : mesh.cells) {
    std::vector<Index> dofs(cell.begin(), cell.end());
    for (int e = 0; e < 3; ++e) {
      const Index a = cell[e], b = cell[(e + 1) % 3];
      const auto key = std::minmax(a, b);
      const Index first = edge_first.at({key.first, key.second});
      for (int k = 0; k < p - 1; ++k) dofs.push_back(a < b ? first + k : first + (p - 2 - k));
    }
    for (int k = 0; k < interior; ++k) dofs.push_back(next++);
    dm.cell_dofs.push_back(std::move(dofs));
  }
  dm.num_scalar = next;
  dm.node_coords.assign(static_cast<std::size_t>(next), Point::Zero());
  dm.on_boundary.assign(static_cast<std::size_t>(next), 0);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto& v = mesh.cells[static_cast<std::size_t>(c)];
    const Point o = mesh.vertices[v[0]];
    Eigen::Matrix2d jac;
    jac.col(0) = mesh.vertices[v[1]] - o;
    jac.col(1) = mesh.vertices[v[2]] - o;
    const auto& dofs = dm.cell_dofs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dofs.size(); ++i)
      dm.node_coords[static_cast<std::size_t>(dofs[i])] = o + jac * element.nodes()[i];
  }
  for (const auto& f : mesh.boundary_facets) {
    dm.on_boundary[static_cast<std::size_t>(f.vertices[0])] = 1;
    dm.on_boundary[static_cast<std::size_t>(f.vertices[1])] = 1;
    const Index first = edge_first.at({f.vertices[0], f.vertices[1]});
    for (int k = 0; k < p - 1; ++k) dm.on_boundary[static_cast<std::size_t>(first + k)] = 1;
  }
  return dm;
}

FESpace::FESpace(std::shared_ptr<const Mesh> mesh, int degree, int quadrature_degree)
    : mesh_(std::move(mesh)), element_(degree), dofs_(build_dofmap(*mesh_, element_)) {
  const int qd = quadrature_degree < 0 ? 2 * degree + 2 : quadrature_degree;
  cell_rule_ = triangle_quadrature(qd);
  facet_rule_ = segment_quadrature(qd);
}

CellGeometry FESpace::geometry(Index cell) const {
  const auto& v = mesh_->cells[static_cast<std::size_t>(cell)];
  CellGeometry g;
  g.origin = mesh_->vertices[v[0]];
  g.jacobian.col(0) = mesh_->vertices[v[1]] - g.origin;
  g.jacobian.col(1) = mesh_->vertices[v[2]] - g.origin;
  g.det = g.jacobian.determinant();
  g.inverse = g.jacobian.inverse();
  return g;
}

std::vector<Eigen::MatrixXd> FESpace::physical_derivatives(const CellGeometry& g, const Point& xi, int max_order) const {
  std::vector<Eigen::MatrixXd> reference;
  for (int m = 0; m <= std::min(max_order, degree()); ++m) reference.push_back(element_.eval_basis(xi, m));
  return to_physical(reference, g, max_order, element_.size());
}

VectorField fe_field(const FESpace& space, const Vector& coeffs) {
  return [&space, coeffs](const QuadPoint& qp) {
    const Eigen::VectorXd phi = space.element().eval_basis(qp.ref, 0).col(0);
    const auto& dm = space.dofs();
    const auto& dofs = dm.cell_dofs[static_cast<std::size_t>(qp.cell)];
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < dofs.size(); ++i)
      for (int c = 0; c < 2; ++c) v(c) += coeffs(dm.vector_dof(c, dofs[i])) * phi(static_cast<Eigen::Index>(i));
    return v;
  };
}

Vector interpolate(const FESpace& space, const std::function<Eigen::Vector2d(const CellSide&, const Point&)>& u) {
  const auto& dm = space.dofs();
  Vector out = Vector::Zero(dm.num_vector());
  for (Index c = 0; c < space.mesh().num_cells(); ++c) {
    const CellSide side = side_of(space.mesh(), c);
    const auto& dofs = dm.cell_dofs[static_cast<std::size_t>(c)];
    for (std::size_t i = 0; i < dofs.size(); ++i) {
      const Eigen::Vector2d val = u(side, dm.node_coords[static_cast<std::size_t>(dofs[i])]);
      for (int comp = 0; comp < 2; ++comp) out(dm.vector_dof(comp, dofs[i])) = val(comp);
    }
  }
  return out;
}

StabilizationParams StabilizationParams::defaults(int p) {
  StabilizationParams s;
  const double g = 1e-5 / std::pow(static_cast<double>(p), 3.5);
  s.gamma.assign(static_cast<std::size_t>(p), 0.0);
  s.beta.assign(static_cast<std::size_t>(p), 0.0);
  s.gamma[0] = g;
  s.gamma_gls = g;
  s.alpha = 1e-3;
  return s;
}

void StabilizationParams::validate(int p, bool smooth_material) const {
  if (static_cast<int>(gamma.size()) != p || static_cast<int>(beta.size()) != p)
    throw AssemblyError("need exactly p jump penalties gamma_j and beta_j");
  if (!(gamma[0] > 0.0)) throw AssemblyError("gamma_1 must be positive");
  if (!(gamma_gls > 0.0)) throw AssemblyError("gamma_gls must be positive");
  if (!(alpha > 0.0)) throw AssemblyError("alpha must be positive");
  for (int j = 2; j <= p; ++j) {
    const double g = gamma[static_cast<std::size_t>(j - 1)], b = beta[static_cast<std::size_t>(j - 1)];
    if (g < std::max(0.0, std::abs(b))) throw AssemblyError("gamma_" + std::to_string(j) + " must be >= max(0, |beta_j|)");
    if (!smooth_material && (g != 0.0 || b != 0.0))
      throw AssemblyError("higher-order jump penalties require globally smooth coefficients");
  }
}

Eigen::MatrixXd stress_derivatives(const std::vector<Eigen::MatrixXd>& d, const MaterialPoint& mat, int m) {
  const Eigen::Index nb = d[0].rows();
  const int nc = 1 << m;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * nb, 4 * nc);
  int sdirs[3], rdirs[3];
  for (int cidx = 0; cidx < nc; ++cidx) {
    for (int subset = 0; subset < nc; ++subset) {
      int ns = 0, nr = 0;
      for (int t = 0; t < m; ++t) {
        const int dir = (cidx >> t) & 1;
        if ((subset >> t) & 1) sdirs[ns++] = dir;
        else rdirs[nr++] = dir;
      }
      const double dmu = coefficient_derivative(mat.mu, sdirs, ns);
      const double dlambda = coefficient_derivative(mat.lambda, sdirs, ns);
      if (dmu == 0.0 && dlambda == 0.0) continue;
      int rflat = 0;
      for (int t = 0; t < nr; ++t) rflat |= rdirs[t] << t;
      // d^{R + e} phi for one extra direction e
      const Eigen::MatrixXd& table = d[static_cast<std::size_t>(nr + 1)];
      const auto with = [&](int e) { return table.col(rflat | (e << nr)); };
      for (int a = 0; a < 2; ++a) {
        for (int b = 0; b < 2; ++b) {
          const int col = (a * 2 + b) * nc + cidx;
          for (int c = 0; c < 2; ++c) {
            auto block = out.block(c * nb, col, nb, 1);
            if (a == c) block += dmu * with(b);
            if (b == c) block += dmu * with(a);
            if (a == b) block += dlambda * with(c);
          }
        }
      }
    }
  }
  return out;
}

Eigen::MatrixXd lame_of_basis(const std::vector<Eigen::MatrixXd>& d, const MaterialPoint& mat) {
  const Eigen::Index nb = d[0].rows();
  const Eigen::MatrixXd s = stress_derivatives(d, mat, 1);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(2 * nb, 2);
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) out.col(a) -= s.col((a * 2 + b) * 2 + b);
    out.block(a * nb, a, nb, 1) -= mat.rho * d[0];
  }
  return out;
}

SparseMatrix assemble_a_h(const FESpace& space, const MaterialModel& material) {
  return assemble_cells(space, all_cells(space.mesh()), 1,
                        [&](const QuadPoint& qp, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::MatrixXd& local) {
                          const MaterialPoint mp = material.eval(qp.side, qp.x);
                          const Eigen::Index nb = d[0].rows();
                          const Eigen::MatrixXd& g = d[1];  // nb x 2
                          const Eigen::MatrixXd lap = g * g.transpose();
                          const Eigen::MatrixXd mass = d[0] * d[0].transpose();
                          // row block: test component r, column block: trial component c
                          for (int r = 0; r < 2; ++r) {
                            for (int c = 0; c < 2; ++c) {
                              Eigen::MatrixXd blk = mp.mu.value * g.col(c) * g.col(r).transpose() +
                                                    mp.lambda.value * g.col(r) * g.col(c).transpose();
                              if (r == c) blk += mp.mu.value * lap - mp.rho * mass;
                              local.block(r * nb, c * nb, nb, nb) += w * blk;
                            }
                          }
                        });
}

SparseMatrix assemble_jump(const FESpace& space, const MaterialModel& material, int j) {
  if (j < 1 || j > space.degree())
    throw AssemblyError("jump order " + std::to_string(j) + " outside 1.." + std::to_string(space.degree()));
  const Mesh& mesh = space.mesh();
  const int m = j - 1;
  const int nc = 1 << m;
  const auto nb = static_cast<Eigen::Index>(space.element().size());
  const double scale = std::pow(space.h(), 2 * j - 1);
  const auto& rule = space.facet_rule();
  Triplets triplets;
  triplets.reserve(mesh.interior_facets.size() * static_cast<std::size_t>(16 * nb * nb));
  std::vector<Index> rows, rows1;
  Eigen::MatrixXd traction(4 * nb, 2 * nc);
  Eigen::MatrixXd local(4 * nb, 4 * nb);
  for (const auto& facet : mesh.interior_facets) {
    const Point a = mesh.vertices[facet.vertices[0]], b = mesh.vertices[facet.vertices[1]];
    const double len = (b - a).norm();
    std::array<CellGeometry, 2> geo{space.geometry(facet.cells[0]), space.geometry(facet.cells[1])};
    std::array<CellSide, 2> sides{side_of(mesh, facet.cells[0]), side_of(mesh, facet.cells[1])};
    local.setZero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Point x = a + rule.points[q].x() * (b - a);
      for (int s = 0; s < 2; ++s) {
        const Point n = s == 0 ? facet.normal : Point(-facet.normal);
        const auto d = space.physical_derivatives(geo[s], geo[s].to_reference(x), j);
        const Eigen::MatrixXd sd = stress_derivatives(d, material.eval(sides[s], x), m);
        for (int ai = 0; ai < 2; ++ai)
          for (int ci = 0; ci < nc; ++ci)
            traction.block(s * 2 * nb, ai * nc + ci, 2 * nb, 1) =
                sd.col((ai * 2 + 0) * nc + ci) * n.x() + sd.col((ai * 2 + 1) * nc + ci) * n.y();
      }
      local += (rule.weights[q] * len * scale) * traction * traction.transpose();
    }
    local_to_global(space, facet.cells[0], rows);
    local_to_global(space, facet.cells[1], rows1);
    rows.insert(rows.end(), rows1.begin(), rows1.end());
    scatter(triplets, rows, local);
  }
  return from_triplets(space, triplets);
}

SparseMatrix assemble_gls(const FESpace& space, const MaterialModel& material) {
  const double h2 = space.h() * space.h();
  return assemble_cells(space, all_cells(space.mesh()), 2,
                        [&](const QuadPoint& qp, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::MatrixXd& local) {
                          const Eigen::MatrixXd l = lame_of_basis(d, material.eval(qp.side, qp.x));
                          local += (w * h2) * l * l.transpose();
                        });
}

Vector assemble_gls_rhs(const FESpace& space, const MaterialModel& material, const VectorField& f) {
  const double h2 = space.h() * space.h();
  return assemble_cell_vector(space, all_cells(space.mesh()), 2,
                              [&](const QuadPoint& qp, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::VectorXd& local) {
                                const Eigen::MatrixXd l = lame_of_basis(d, material.eval(qp.side, qp.x));
                                local += (w * h2) * l * f(qp);
                              });
}

SparseMatrix assemble_mass(const FESpace& space) { return assemble_region_mass(space, Region::domain); }

SparseMatrix assemble_region_mass(const FESpace& space, Region region) {
  const auto cells = space.mesh().cells_in(region);
  if (cells.empty()) throw AssemblyError("region " + to_string(region) + " has no cells");
  return assemble_cells(space, cells, 0,
                        [](const QuadPoint&, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::MatrixXd& local) {
                          add_mass(d, w, local);
                        });
}

SparseMatrix assemble_omega_mass(const FESpace& space) { return assemble_region_mass(space, Region::omega); }

Vector assemble_omega_rhs(const FESpace& space, const VectorField& u_omega) {
  const auto cells = space.mesh().cells_in(Region::omega);
  if (cells.empty()) throw AssemblyError("region omega has no cells");
  return assemble_cell_vector(space, cells, 0,
                              [&](const QuadPoint& qp, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::VectorXd& local) {
                                const Eigen::Vector2d u = u_omega(qp);
                                const Eigen::Index nb = d[0].rows();
                                local.head(nb) += w * u(0) * d[0].col(0);
                                local.tail(nb) += w * u(1) * d[0].col(0);
                              });
}

Vector assemble_load(const FESpace& space, const VectorField& f) {
  return assemble_cell_vector(space, all_cells(space.mesh()), 0,
                              [&](const QuadPoint& qp, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::VectorXd& local) {
                                const Eigen::Vector2d v = f(qp);
                                const Eigen::Index nb = d[0].rows();
                                local.head(nb) += w * v(0) * d[0].col(0);
                                local.tail(nb) += w * v(1) * d[0].col(0);
                              });
}

SparseMatrix assemble_tikhonov(const FESpace& space, double alpha) {
  return (alpha * std::pow(space.h(), 2 * space.degree())) * assemble_mass(space);
}

SparseMatrix assemble_dual_laplacian(const FESpace& space) {
  return assemble_cells(space, all_cells(space.mesh()), 1,
                        [](const QuadPoint&, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::MatrixXd& local) {
                          const Eigen::Index nb = d[0].rows();
                          const Eigen::MatrixXd lap = w * d[1] * d[1].transpose();
                          local.topLeftCorner(nb, nb) += lap;
                          local.bottomRightCorner(nb, nb) += lap;
                        });
}

SparseMatrix assemble_div_matrix(const FESpace& space) {
  return assemble_cells(space, all_cells(space.mesh()), 1,
                        [](const QuadPoint&, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::MatrixXd& local) {
                          const Eigen::Index nb = d[0].rows();
                          Eigen::VectorXd div(2 * nb);
                          div << d[1].col(0), d[1].col(1);
                          local += w * div * div.transpose();
                        });
}

Vector assemble_div_rhs(const FESpace& space, const ScalarField& q) {
  return assemble_cell_vector(space, all_cells(space.mesh()), 1,
                              [&](const QuadPoint& qp, const std::vector<Eigen::MatrixXd>& d, double w, Eigen::VectorXd& local) {
                                const Eigen::Index nb = d[0].rows();
                                const double val = q(qp);
                                local.head(nb) += w * val * d[1].col(0);
                                local.tail(nb) += w * val * d[1].col(1);
                              });
}

}  // namespace ucfem
