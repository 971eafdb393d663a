#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ucfem/forms.hpp"
#include "ucfem/manufactured.hpp"

namespace ucfem {

struct RegionError {
  double absolute = 0.0;
  double relative = 0.0;
};

/// ||u_h - u||_R and ||u_h - u||_R / ||u||_R over the cells tagged R.
RegionError region_l2_error(const FESpace& space, const Vector& u_h, const ReferenceSolution& reference, Region region);

/// ||grad(u_h - u)||_R, analytic gradient of the reference.
double region_h1_seminorm_error(const FESpace& space, const Vector& u_h, const ReferenceSolution& reference,
                                Region region);

/// k ||u - u_h||_R + ||grad u - grad u_h||_R
double weighted_error(const FESpace& space, const Vector& u_h, const ReferenceSolution& reference, Region region,
                      double k);

/// log2(e[i-1] / e[i]); the first entry is empty.
std::vector<std::optional<double>> eoc(const std::vector<double>& errors);

/// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  Index dofs = 0;
  std::vector<RegionError> errors;  // one per table region
  std::optional<double> weighted;
  std::optional<double> kappa;
};

class ConvergenceTable {
 public:
  explicit ConvergenceTable(std::vector<Region> regions) : regions_(std::move(regions)) {}

  void add(ConvergenceRow row);
  const std::vector<Region>& regions() const { return regions_; }
  const std::vector<ConvergenceRow>& rows() const { return rows_; }
  /// Relative errors of one region, by row.
  std::vector<double> relative(Region region) const;
  std::vector<std::optional<double>> rates(Region region) const { return eoc(relative(region)); }

  /// Header plus one comma-separated row per level.
  std::string to_csv() const;

 private:
  std::size_t column(Region region) const;

  std::vector<Region> regions_;
  std::vector<ConvergenceRow> rows_;
};

/// Fixed-width scientific rendering used in all CSV output.
std::string format_number(double v);

}  // namespace ucfem
