#include "ucfem/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/format.h>

namespace ucfem {

namespace {

struct Accumulated {
  double diff = 0.0;
  double ref = 0.0;
  double grad_diff = 0.0;
};

Accumulated accumulate(const FESpace& space, const Vector& u_h, const ReferenceSolution& reference, Region region,
                       bool gradients) {
  const auto& mesh = space.mesh();
  const auto cells = mesh.cells_in(region);
  if (cells.empty()) throw std::invalid_argument("region " + to_string(region) + " has no cells");
  const auto& dm = space.dofs();
  const auto& rule = space.cell_rule();
  const Index nb = static_cast<Index>(space.element().size());
  Accumulated acc;
  for (Index c : cells) {
    const CellGeometry g = space.geometry(c);
    const CellSide side{mesh.centroid(c)};
    const auto& local = dm.cell_dofs[static_cast<std::size_t>(c)];
    Eigen::MatrixXd coeff(nb, 2);
    for (Index i = 0; i < nb; ++i)
      for (int comp = 0; comp < 2; ++comp) coeff(i, comp) = u_h(dm.vector_dof(comp, local[static_cast<std::size_t>(i)]));
    for (std::size_t q = 0; q < rule.weights.size(); ++q) {
      const Point& xi = rule.points[q];
      const Point x = g.to_physical(xi);
      const double w = rule.weights[q] * std::abs(g.det);
      const auto d = space.physical_derivatives(g, xi, gradients ? 1 : 0);
      const DisplacementJet jet = reference.jet(side, x);
      const Eigen::Vector2d uh = coeff.transpose() * d[0].col(0);
      acc.diff += w * (uh - jet.u).squaredNorm();
      acc.ref += w * jet.u.squaredNorm();
      if (gradients) {
        // grad(a, b) = d_b u_a
        const Eigen::Matrix2d gh = coeff.transpose() * d[1];
        acc.grad_diff += w * (gh - jet.grad).squaredNorm();
      }
    }
  }
  return acc;
}

}  // namespace

RegionError region_l2_error(const FESpace& space, const Vector& u_h, const ReferenceSolution& reference, Region region) {
  const Accumulated a = accumulate(space, u_h, reference, region, false);
  RegionError e;
  e.absolute = std::sqrt(a.diff);
  e.relative = a.ref > 0.0 ? std::sqrt(a.diff / a.ref) : e.absolute;
  return e;
}

double region_h1_seminorm_error(const FESpace& space, const Vector& u_h, const ReferenceSolution& reference,
                                Region region) {
  return std::sqrt(accumulate(space, u_h, reference, region, true).grad_diff);
}

double weighted_error(const FESpace& space, const Vector& u_h, const ReferenceSolution& reference, Region region,
                      double k) {
  const Accumulated a = accumulate(space, u_h, reference, region, true);
  return k * std::sqrt(a.diff) + std::sqrt(a.grad_diff);
}

std::vector<std::optional<double>> eoc(const std::vector<double>& errors) {
  std::vector<std::optional<double>> out(errors.size());
  for (std::size_t i = 1; i < errors.size(); ++i) out[i] = std::log2(errors[i - 1] / errors[i]);
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("slope fit needs at least two points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string format_number(double v) { return fmt::format("{:.9e}", v); }

void ConvergenceTable::add(ConvergenceRow row) {
  if (row.errors.size() != regions_.size()) throw std::invalid_argument("row does not match table regions");
  rows_.push_back(std::move(row));
}

std::size_t ConvergenceTable::column(Region region) const {
  for (std::size_t i = 0; i < regions_.size(); ++i)
    if (regions_[i] == region) return i;
  throw std::invalid_argument("region " + to_string(region) + " not in table");
}

std::vector<double> ConvergenceTable::relative(Region region) const {
  const std::size_t col = column(region);
  std::vector<double> out;
  for (const auto& r : rows_) out.push_back(r.errors[col].relative);
  return out;
}

std::string ConvergenceTable::to_csv() const {
  std::string out = "level,h,dofs";
  for (Region r : regions_) {
    const std::string n = to_string(r);
    out += "," + n + "_abs," + n + "_rel," + n + "_eoc";
  }
  out += ",weighted,kappa\n";
  std::vector<std::vector<std::optional<double>>> rates;
  for (Region r : regions_) rates.push_back(this->rates(r));
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto& row = rows_[i];
    out += fmt::format("{},{},{}", row.level, format_number(row.h), row.dofs);
    for (std::size_t j = 0; j < regions_.size(); ++j) {
      out += "," + format_number(row.errors[j].absolute) + "," + format_number(row.errors[j].relative) + ",";
      if (rates[j][i]) out += fmt::format("{:.4f}", *rates[j][i]);
    }
    out += ",";
    if (row.weighted) out += format_number(*row.weighted);
    out += ",";
    if (row.kappa) out += format_number(*row.kappa);
    out += "\n";
  }
  return out;
}

}  // namespace ucfem
