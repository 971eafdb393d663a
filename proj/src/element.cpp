#include "ucfem/element.hpp"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace ucfem {

namespace {

// Gauss-Legendre nodes and weights on [0, 1] via the Golub-Welsch eigenproblem.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int i = 1; i < n; ++i) {
    const double b = i / std::sqrt(4.0 * i * i - 1.0);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    x[static_cast<std::size_t>(i)] = 0.5 * (eig.eigenvalues()(i) + 1.0);
    const double v0 = eig.eigenvectors()(0, i);
    w[static_cast<std::size_t>(i)] = v0 * v0;  // 2 v0^2 on [-1, 1], halved on [0, 1]
  }
}

double falling_factor(int a, int m) {
  double f = 1.0;
  for (int i = 0; i < m; ++i) f *= a - i;
  return f;
}

}  // namespace

QuadratureRule triangle_quadrature(int required_degree) {
  if (required_degree < 0) throw ElementError("quadrature degree must be non-negative");
  QuadratureRule rule;
  if (required_degree <= 1) {
    rule.points = {Point(1.0 / 3.0, 1.0 / 3.0)};
    rule.weights = {0.5};
    rule.degree = 1;
    return rule;
  }
  // Collapsed tensor rule: x = s, y = t (1 - s), Jacobian (1 - s).
  const int n = (required_degree + 3) / 2;
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = gx[static_cast<std::size_t>(i)], t = gx[static_cast<std::size_t>(j)];
      rule.points.emplace_back(s, t * (1.0 - s));
      rule.weights.push_back(gw[static_cast<std::size_t>(i)] * gw[static_cast<std::size_t>(j)] * (1.0 - s));
    }
  }
  rule.degree = 2 * n - 2;
  return rule;
}

QuadratureRule segment_quadrature(int required_degree) {
  if (required_degree < 0) throw ElementError("quadrature degree must be non-negative");
  const int n = required_degree / 2 + 1;
  std::vector<double> gx, gw;
  gauss_legendre(n, gx, gw);
  QuadratureRule rule;
  for (int i = 0; i < n; ++i) rule.points.emplace_back(gx[static_cast<std::size_t>(i)], 0.0);
  rule.weights = gw;
  rule.degree = 2 * n - 1;
  return rule;
}

ReferenceElement::ReferenceElement(int degree) : degree_(degree) {
  if (degree < 1 || degree > 3) throw ElementError("element degree must be 1, 2 or 3, got " + std::to_string(degree));
  const double p = degree;
  const std::array<Point, 3> verts{Point(0, 0), Point(1, 0), Point(0, 1)};
  for (const auto& v : verts) nodes_.push_back(v);
  for (int e = 0; e < 3; ++e) {
    const Point& a = verts[static_cast<std::size_t>(e)];
    const Point& b = verts[static_cast<std::size_t>((e + 1) % 3)];
    for (int k = 1; k < degree; ++k) nodes_.push_back(a + (b - a) * (k / p));
  }
  for (int j = 1; j < degree; ++j)
    for (int i = 1; i + j < degree; ++i) nodes_.emplace_back(i / p, j / p);

  for (int total = 0; total <= degree; ++total)
    for (int b = 0; b <= total; ++b) monomials_.emplace_back(total - b, b);

  const auto n = static_cast<Eigen::Index>(nodes_.size());
  Eigen::MatrixXd vandermonde(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto [a, b] = monomials_[static_cast<std::size_t>(j)];
      vandermonde(i, j) = std::pow(nodes_[static_cast<std::size_t>(i)].x(), a) *
                          std::pow(nodes_[static_cast<std::size_t>(i)].y(), b);
    }
  coefficients_ = vandermonde.fullPivLu().inverse();
}

Eigen::MatrixXd ReferenceElement::eval_basis(const Point& point, int order) const {
  if (order < 0 || order > degree_)
    throw ElementError("derivative order " + std::to_string(order) + " exceeds element degree " +
                       std::to_string(degree_));
  const auto n = static_cast<Eigen::Index>(monomials_.size());
  Eigen::MatrixXd mono(n, order + 1);
  for (Eigen::Index j = 0; j < n; ++j) {
    const auto [a, b] = monomials_[static_cast<std::size_t>(j)];
    for (int db = 0; db <= order; ++db) {
      const int da = order - db;
      if (da > a || db > b) {
        mono(j, db) = 0.0;
        continue;
      }
      mono(j, db) = falling_factor(a, da) * falling_factor(b, db) * std::pow(point.x(), a - da) *
                    std::pow(point.y(), b - db);
    }
  }
  return coefficients_.transpose() * mono;
}

}  // namespace ucfem
