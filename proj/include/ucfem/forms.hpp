#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/LU>
#include <Eigen/SparseCore>

#include "ucfem/coefficients.hpp"
#include "ucfem/element.hpp"
#include "ucfem/mesh.hpp"

namespace ucfem {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Vector = Eigen::VectorXd;

class AssemblyError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Scalar degrees of freedom of the continuous degree-p Lagrange space.
/// Vector fields use two blocks: dof (component c, scalar s) -> c * num_scalar + s.
struct DofMap {
  int degree = 1;
  Index num_scalar = 0;
  std::vector<std::vector<Index>> cell_dofs;  // scalar dofs in local node order
  std::vector<Point> node_coords;
  std::vector<char> on_boundary;

  Index num_vector() const { return 2 * num_scalar; }
  Index vector_dof(int comp, Index scalar) const { return comp * num_scalar + scalar; }
  /// Vector dofs whose nodes lie on the boundary of the unit square.
  std::vector<Index> boundary_vector_dofs() const;
};

DofMap build_dofmap(const Mesh& mesh, const ReferenceElement& element);

/// Affine map x = origin + jacobian * xi of one cell.
struct CellGeometry {
  Point origin;
  Eigen::Matrix2d jacobian;
  Eigen::Matrix2d inverse;
  double det = 0.0;

  Point to_physical(const Point& xi) const { return origin + jacobian * xi; }
  Point to_reference(const Point& x) const { return inverse * (x - origin); }
};

/// Mesh + Lagrange element + dof numbering + quadrature choice.
class FESpace {
 public:
  FESpace(std::shared_ptr<const Mesh> mesh, int degree, int quadrature_degree = -1);

  const Mesh& mesh() const { return *mesh_; }
  std::shared_ptr<const Mesh> mesh_ptr() const { return mesh_; }
  const ReferenceElement& element() const { return element_; }
  const DofMap& dofs() const { return dofs_; }
  int degree() const { return element_.degree(); }
  double h() const { return mesh_->h; }
  const QuadratureRule& cell_rule() const { return cell_rule_; }
  const QuadratureRule& facet_rule() const { return facet_rule_; }
  CellGeometry geometry(Index cell) const;

  /// Physical derivatives of all local basis functions at a reference point.
  /// Entry [m] is (basis x 2^m): the full order-m derivative tensor, column
  /// index sum_t d_t 2^t for directions d_t in {0 = x, 1 = y}.
  std::vector<Eigen::MatrixXd> physical_derivatives(const CellGeometry& g, const Point& xi, int max_order) const;

 private:
  std::shared_ptr<const Mesh> mesh_;
  ReferenceElement element_;
  DofMap dofs_;
  QuadratureRule cell_rule_;
  QuadratureRule facet_rule_;
};

/// Quadrature point handed to field callbacks.
struct QuadPoint {
  Index cell;
  CellSide side;
  Point ref;
  Point x;
};

using VectorField = std::function<Eigen::Vector2d(const QuadPoint&)>;
using ScalarField = std::function<double(const QuadPoint&)>;

/// Finite element function with the given vector coefficients.
VectorField fe_field(const FESpace& space, const Vector& coeffs);

/// Nodal interpolant; cell sides are passed so piecewise fields pick their branch.
Vector interpolate(const FESpace& space, const std::function<Eigen::Vector2d(const CellSide&, const Point&)>& u);

/// Penalty parameters of the stabilized Lagrangian. gamma[j-1] and beta[j-1]
/// weigh the order-j stress jump J_j.
struct StabilizationParams {
  std::vector<double> gamma;
  std::vector<double> beta;
  double gamma_gls = 0.0;
  double alpha = 0.0;

  /// gamma_1 = gamma_gls = 1e-5 / p^3.5, alpha = 1e-3, all other penalties zero.
  static StabilizationParams defaults(int p);
  /// Throws AssemblyError unless gamma_1, gamma_gls, alpha > 0 and
  /// gamma_j >= max(0, |beta_j|) for j >= 2; higher-order jumps must be off
  /// for non-smooth materials.
  void validate(int p, bool smooth_material) const;
};

/// a_h(u, v) = int 2 mu E(u):E(v) + lambda div u div v - rho u.v
SparseMatrix assemble_a_h(const FESpace& space, const MaterialModel& material);

/// J_j(u, v) = sum_F h^{2j-1} int_F [grad^{j-1} sigma(u) n] : [grad^{j-1} sigma(v) n]
SparseMatrix assemble_jump(const FESpace& space, const MaterialModel& material, int j);

/// h^2 sum_K (L u, L v)_K
SparseMatrix assemble_gls(const FESpace& space, const MaterialModel& material);
/// h^2 sum_K (f, L v)_K
Vector assemble_gls_rhs(const FESpace& space, const MaterialModel& material, const VectorField& f);

SparseMatrix assemble_mass(const FESpace& space);
SparseMatrix assemble_region_mass(const FESpace& space, Region region);
SparseMatrix assemble_omega_mass(const FESpace& space);
Vector assemble_omega_rhs(const FESpace& space, const VectorField& u_omega);
/// (f, v)_Omega
Vector assemble_load(const FESpace& space, const VectorField& f);

/// alpha h^{2p} (u, v)_Omega
SparseMatrix assemble_tikhonov(const FESpace& space, double alpha);

/// int grad z : grad w
SparseMatrix assemble_dual_laplacian(const FESpace& space);

/// (div u, div v)_Omega and (q, div v)_Omega
SparseMatrix assemble_div_matrix(const FESpace& space);
Vector assemble_div_rhs(const FESpace& space, const ScalarField& q);

/// Derivatives of sigma(phi e_c) of order m, evaluated from basis derivative
/// tables `d` (orders 0..m+1). Row c * nb + i, column (a * 2 + b) * 2^m + multi-index.
Eigen::MatrixXd stress_derivatives(const std::vector<Eigen::MatrixXd>& d, const MaterialPoint& mat, int m);

/// L(phi_i e_c) at a point: row c * nb + i, columns the two components.
Eigen::MatrixXd lame_of_basis(const std::vector<Eigen::MatrixXd>& d, const MaterialPoint& mat);

}  // namespace ucfem
