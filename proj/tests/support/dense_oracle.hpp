#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <utility>

#include <Eigen/Dense>

#include "ucfem/forms.hpp"

namespace ucfem::oracle {

// Brute-force P1 oracle on an arbitrary triangle mesh: hat functions are
// rebuilt from vertex coordinates, integrals use a collapsed tensor Gauss rule.
class DenseOracle {
 public:
  DenseOracle(const Mesh& mesh, const DofMap& dofs, double mu, double lambda, double rho)
      : mesh_(mesh), dofs_(dofs), mu_(mu), lambda_(lambda), rho_(rho), n_(dofs.num_vector()) {}

  // hat of scalar dof s restricted to cell c: value = a + g.x
  std::pair<double, Eigen::Vector2d> hat(Index c, Index s) const {
    Eigen::Matrix3d m;
    Eigen::Vector3d rhs = Eigen::Vector3d::Zero();
    for (int i = 0; i < 3; ++i) {
      const Point& v = mesh_.vertices[static_cast<std::size_t>(mesh_.cells[static_cast<std::size_t>(c)][static_cast<std::size_t>(i)])];
      m.row(i) << 1, v.x(), v.y();
      if ((v - dofs_.node_coords[static_cast<std::size_t>(s)]).norm() < 1e-14) rhs[i] = 1;
    }
    const Eigen::Vector3d a = m.partialPivLu().solve(rhs);
    return {a[0], a.tail<2>()};
  }

  // gradient of vector basis function i (component c, row c = grad phi)
  Eigen::Matrix2d grad(Index cell, Index i) const {
    const auto [c, s] = split(i);
    Eigen::Matrix2d g = Eigen::Matrix2d::Zero();
    g.row(c) = hat(cell, s).second.transpose();
    return g;
  }

  Eigen::Vector2d value(Index cell, Index i, const Point& x) const {
    const auto [c, s] = split(i);
    const auto [a, g] = hat(cell, s);
    Eigen::Vector2d v = Eigen::Vector2d::Zero();
    v[c] = a + g.dot(x);
    return v;
  }

  Eigen::Matrix2d stress(const Eigen::Matrix2d& g) const {
    return mu_ * (g + g.transpose()) + lambda_ * g.trace() * Eigen::Matrix2d::Identity();
  }

  template <class F>
  double integrate(Index cell, F&& f) const {
    static const std::array<double, 3> gx{0.5 - 0.5 * std::sqrt(0.6), 0.5, 0.5 + 0.5 * std::sqrt(0.6)};
    static const std::array<double, 3> gw{5.0 / 18, 8.0 / 18, 5.0 / 18};
    const auto& cv = mesh_.cells[static_cast<std::size_t>(cell)];
    const Point v0 = mesh_.vertices[static_cast<std::size_t>(cv[0])];
    const Point v1 = mesh_.vertices[static_cast<std::size_t>(cv[1])];
    const Point v2 = mesh_.vertices[static_cast<std::size_t>(cv[2])];
    const double det = std::abs((v1 - v0).x() * (v2 - v0).y() - (v1 - v0).y() * (v2 - v0).x());
    double sum = 0;
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        const double s = gx[static_cast<std::size_t>(a)], t = gx[static_cast<std::size_t>(b)];
        const Point x = v0 + s * (v1 - v0) + s * t * (v2 - v1);
        sum += gw[static_cast<std::size_t>(a)] * gw[static_cast<std::size_t>(b)] * s * det * f(x);
      }
    return sum;
  }

  template <class F>
  Eigen::MatrixXd cell_matrix(bool omega_only, F&& entry) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (Index c = 0; c < mesh_.num_cells(); ++c) {
      if (omega_only && !mesh_.has_tag(c, Region::omega)) continue;
      for (Index i = 0; i < n_; ++i)
        for (Index j = 0; j < n_; ++j)
          if (touches(c, i) && touches(c, j)) m(i, j) += integrate(c, [&](const Point& x) { return entry(c, i, j, x); });
    }
    return m;
  }

  Eigen::MatrixXd mass(bool omega_only) const {
    return cell_matrix(omega_only, [&](Index c, Index i, Index j, const Point& x) {
      return value(c, i, x).dot(value(c, j, x));
    });
  }

  Eigen::MatrixXd a_h() const {
    return cell_matrix(false, [&](Index c, Index i, Index j, const Point& x) {
      const Eigen::Matrix2d gi = grad(c, i), gj = grad(c, j);
      const Eigen::Matrix2d ei = (gi + gi.transpose()) / 2, ej = (gj + gj.transpose()) / 2;
      return 2 * mu_ * (ei.array() * ej.array()).sum() + lambda_ * gi.trace() * gj.trace() -
             rho_ * value(c, i, x).dot(value(c, j, x));
    });
  }

  Eigen::MatrixXd laplacian() const {
    return cell_matrix(false, [&](Index c, Index i, Index j, const Point&) {
      return (grad(c, i).array() * grad(c, j).array()).sum();
    });
  }

  Eigen::MatrixXd divergence() const {
    return cell_matrix(false, [&](Index c, Index i, Index j, const Point&) { return grad(c, i).trace() * grad(c, j).trace(); });
  }

  // second derivatives of P1 functions vanish, so L phi = -rho phi
  Eigen::MatrixXd gls(double h) const { return h * h * rho_ * rho_ * mass(false); }

  Eigen::MatrixXd jump(double h) const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (const auto& f : mesh_.interior_facets) {
      const Point a = mesh_.vertices[static_cast<std::size_t>(f.vertices[0])];
      const Point b = mesh_.vertices[static_cast<std::size_t>(f.vertices[1])];
      Point n(-(b - a).y(), (b - a).x());
      n /= n.norm();
      const double len = (b - a).norm();
      for (Index i = 0; i < n_; ++i)
        for (Index j = 0; j < n_; ++j) {
          auto jmp = [&](Index k) {
            Eigen::Vector2d r = Eigen::Vector2d::Zero();
            if (touches(f.cells[1], k)) r += stress(grad(f.cells[1], k)) * n;
            if (touches(f.cells[0], k)) r -= stress(grad(f.cells[0], k)) * n;
            return r;
          };
          m(i, j) += h * len * jmp(i).dot(jmp(j));
        }
    }
    return m;
  }

 private:
  std::pair<int, Index> split(Index i) const {
    return {static_cast<int>(i / dofs_.num_scalar), i % dofs_.num_scalar};
  }
  bool touches(Index cell, Index i) const {
    const Index s = split(i).second;
    for (Index v : mesh_.cells[static_cast<std::size_t>(cell)])
      if ((mesh_.vertices[static_cast<std::size_t>(v)] - dofs_.node_coords[static_cast<std::size_t>(s)]).norm() < 1e-14)
        return true;
    return false;
  }

  const Mesh& mesh_;
  const DofMap& dofs_;
  double mu_, lambda_, rho_;
  Index n_;
};

inline std::shared_ptr<const Mesh> two_cell_mesh(bool tag_first_cell) {
  Mesh m = build_fitted_mesh({0, 1}, {0, 1});
  if (tag_first_cell) m.cell_tags[0] |= static_cast<std::uint8_t>(1U << static_cast<unsigned>(Region::omega));
  return std::make_shared<const Mesh>(std::move(m));
}

inline double max_diff(const SparseMatrix& a, const Eigen::MatrixXd& b) {
  return (Eigen::MatrixXd(a) - b).cwiseAbs().maxCoeff();
}

// Largest entrywise deviation of every assembled block on the 2-cell P1 mesh.
inline double two_cell_block_deviation(double mu, double lambda, double k) {
  const FESpace space(two_cell_mesh(true), 1);
  const MaterialModel mat = MaterialModel::constant(mu, lambda, k);
  const DenseOracle oracle(space.mesh(), space.dofs(), mu, lambda, -k * k);
  const double h = space.h();
  double worst = 0;
  for (double d : {max_diff(assemble_mass(space), oracle.mass(false)),
                   max_diff(assemble_omega_mass(space), oracle.mass(true)),
                   max_diff(assemble_a_h(space, mat), oracle.a_h()),
                   max_diff(assemble_jump(space, mat, 1), oracle.jump(h)),
                   max_diff(assemble_gls(space, mat), oracle.gls(h)),
                   max_diff(assemble_tikhonov(space, 1e-3), 1e-3 * h * h * oracle.mass(false)),
                   max_diff(assemble_dual_laplacian(space), oracle.laplacian()),
                   max_diff(assemble_div_matrix(space), oracle.divergence())})
    worst = std::max(worst, d);
  return worst;
}

}  // namespace ucfem::oracle
