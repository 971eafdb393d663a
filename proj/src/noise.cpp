#include "ucfem/noise.hpp"

#include <cmath>
#include <random>
#include <set>

#include <Eigen/SparseCholesky>

namespace ucfem {

namespace {

// Uniform on [-1, 1] from the raw 64-bit stream, independent of the library's distributions.
double draw(std::mt19937_64& rng) {
  const double unit = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return 2.0 * unit - 1.0;
}

}  // namespace

double mass_norm(const SparseMatrix& mass, const Vector& coeffs) { return std::sqrt(coeffs.dot(mass * coeffs)); }

Perturbation perturb(const FESpace& space, const NoiseSpec& spec) {
  const auto& mesh = space.mesh();
  const auto& dm = space.dofs();
  const auto omega_cells = mesh.cells_in(Region::omega);
  if (omega_cells.empty()) throw std::invalid_argument("perturbation needs a non-empty omega region");

  std::set<Index> omega_dofs;
  for (Index c : omega_cells)
    for (Index s : dm.cell_dofs[static_cast<std::size_t>(c)])
      for (int comp = 0; comp < 2; ++comp) omega_dofs.insert(dm.vector_dof(comp, s));

  std::mt19937_64 rng(spec.seed);
  Perturbation out;
  out.delta_u = Vector::Zero(dm.num_vector());
  for (Index i : omega_dofs) out.delta_u(i) = draw(rng);
  out.delta_f = Vector::Zero(dm.num_vector());
  for (Index i = 0; i < dm.num_vector(); ++i) out.delta_f(i) = draw(rng);

  const double target = spec.amplitude * std::pow(space.h(), space.degree() - spec.theta);
  const double nu = mass_norm(assemble_omega_mass(space), out.delta_u);
  const double nf = mass_norm(assemble_mass(space), out.delta_f);
  out.delta_u *= target / nu;
  out.delta_f *= target / nf;
  return out;
}

double h_minus_one_norm(const FESpace& space, const Vector& coeffs) {
  const auto& dm = space.dofs();
  std::vector<Index> interior;
  std::vector<char> boundary(static_cast<std::size_t>(dm.num_vector()), 0);
  for (Index i : dm.boundary_vector_dofs()) boundary[static_cast<std::size_t>(i)] = 1;
  for (Index i = 0; i < dm.num_vector(); ++i)
    if (!boundary[static_cast<std::size_t>(i)]) interior.push_back(i);

  const SparseMatrix lap = assemble_dual_laplacian(space);
  const Vector load = assemble_mass(space) * coeffs;
  const auto n = static_cast<Eigen::Index>(interior.size());
  std::vector<Index> map(static_cast<std::size_t>(dm.num_vector()), -1);
  for (Eigen::Index i = 0; i < n; ++i) map[static_cast<std::size_t>(interior[static_cast<std::size_t>(i)])] = i;
  std::vector<Eigen::Triplet<double>> t;
  for (Eigen::Index col = 0; col < lap.outerSize(); ++col)
    for (SparseMatrix::InnerIterator it(lap, col); it; ++it) {
      const Index r = map[static_cast<std::size_t>(it.row())], c = map[static_cast<std::size_t>(it.col())];
      if (r >= 0 && c >= 0) t.emplace_back(r, c, it.value());
    }
  SparseMatrix reduced(n, n);
  reduced.setFromTriplets(t.begin(), t.end());
  Vector b(n);
  for (Eigen::Index i = 0; i < n; ++i) b(i) = load(interior[static_cast<std::size_t>(i)]);
  Eigen::SimplicialLDLT<SparseMatrix> solver(reduced);
  if (solver.info() != Eigen::Success) throw std::runtime_error("Laplacian factorization failed");
  const Vector phi = solver.solve(b);
  return std::sqrt(std::max(0.0, b.dot(phi)));
}

}  // namespace ucfem
