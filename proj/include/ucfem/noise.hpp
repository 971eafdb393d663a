#pragma once

#include <cstdint>

#include "ucfem/forms.hpp"

namespace ucfem {

/// Perturbations are drawn with ||du||_omega = ||df||_Omega = amplitude * h^(p - theta).
struct NoiseSpec {
  int theta = 0;
  double amplitude = 1.0;
  std::uint64_t seed = 0;
};

/// Coefficient vectors of du (supported on omega cells) and df (whole domain),
/// both in the primal finite element space.
struct Perturbation {
  Vector delta_u;
  Vector delta_f;
};

/// Uniform [-1, 1] nodal noise rescaled to the exact target norms.
Perturbation perturb(const FESpace& space, const NoiseSpec& spec);

/// ||g||_{H^-1} of a finite element function, via a discrete Dirichlet Laplacian solve.
double h_minus_one_norm(const FESpace& space, const Vector& coeffs);

/// sqrt(c^T M c) for a mass matrix M.
double mass_norm(const SparseMatrix& mass, const Vector& coeffs);

}  // namespace ucfem
