#pragma once

#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "ucfem/mesh.hpp"

namespace ucfem {

class ElementError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Points and weights on a reference domain. Weights sum to the reference
/// measure: 1/2 on the triangle {x, y >= 0, x + y <= 1}, 1 on [0, 1].
struct QuadratureRule {
  std::vector<Point> points;  // for segment rules only x() is used
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return weights.size(); }
};

QuadratureRule triangle_quadrature(int required_degree);
QuadratureRule segment_quadrature(int required_degree);

/// Scalar Lagrange element of degree 1..3 on the reference triangle with
/// equispaced nodes. Local node order: the three vertices, then the interior
/// nodes of edges (0,1), (1,2), (2,0) each running from the first to the
/// second vertex, then cell-interior nodes.
class ReferenceElement {
 public:
  explicit ReferenceElement(int degree);

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Point>& nodes() const { return nodes_; }

  /// All order-m partials of all basis functions at `point`. Row i is basis
  /// function i; column b holds d^{m-b}/dx^{m-b} d^b/dy^b.
  Eigen::MatrixXd eval_basis(const Point& point, int order) const;

 private:
  int degree_;
  std::vector<Point> nodes_;
  std::vector<std::pair<int, int>> monomials_;  // exponents (a, b) of x^a y^b
  Eigen::MatrixXd coefficients_;                // basis i = sum_j coefficients_(j, i) * monomial_j
};

}  // namespace ucfem
