#pragma once

#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ucfem/forms.hpp"
#include "ucfem/noise.hpp"

namespace ucfem {

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ProblemKind { ill_posed, well_posed_dirichlet };

enum class DataKind { unperturbed, perturbed };

/// Exact data of the problem. With perturbed data the right-hand side uses
/// u_omega + du and f + df, including inside the GLS term h^2 (f, L v).
struct ProblemData {
  VectorField f;
  VectorField u_omega;
  std::function<Eigen::Vector2d(const CellSide&, const Point&)> dirichlet;  // well-posed only
  ScalarField divergence;                                                  // divergence augmentation only
  std::optional<Perturbation> perturbation;
};

struct SystemOptions {
  ProblemKind kind = ProblemKind::ill_posed;
  DataKind data = DataKind::unperturbed;
  bool divergence_augmentation = false;
};

struct Solution {
  Vector u;  // full primal coefficients
  Vector z;  // full dual coefficients (zero on the boundary)
};

struct ConditionEstimate {
  double kappa = 0.0;
  double sigma_max = 0.0;
  double sigma_min = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Blocks of the stabilized optimality system, kept for norm evaluation.
struct SystemBlocks {
  SparseMatrix omega_mass;
  SparseMatrix s_gamma;  // sum gamma_j J_j + gamma_gls GLS
  SparseMatrix s_alpha;
  SparseMatrix a_h;
  SparseMatrix s_beta;
  SparseMatrix s_star;
  SparseMatrix div;  // empty unless augmented
};

/// Saddle-point system over (free primal dofs) x (interior dual dofs):
///   [ M_omega + S_gamma + S_alpha   (A + S_beta)^T ] [u]   [b_u]
///   [ A + S_beta                    -S_star        ] [z] = [b_z]
class SaddleSystem {
 public:
  SaddleSystem(const FESpace& space, SystemBlocks blocks, const SystemOptions& options);
  ~SaddleSystem();
  SaddleSystem(SaddleSystem&&) noexcept;
  SaddleSystem& operator=(SaddleSystem&&) noexcept;

  const SparseMatrix& matrix() const { return matrix_; }
  const Vector& rhs() const { return rhs_; }
  const SystemBlocks& blocks() const { return blocks_; }
  Index num_primal() const { return static_cast<Index>(primal_free_.size()); }
  Index num_dual() const { return static_cast<Index>(dual_free_.size()); }
  const std::vector<Index>& primal_free() const { return primal_free_; }
  const std::vector<Index>& dual_free() const { return dual_free_; }

  /// Builds the reduced right-hand side from full-space load vectors and
  /// prescribed primal values (well-posed case).
  void set_rhs(const Vector& primal_load, const Vector& dual_load, const Vector& prescribed_u);

  void factorize();
  Solution solve();
  /// Solves K x = b for a reduced vector b.
  Vector solve_reduced(const Vector& b);

  /// Relative residual of the last solve.
  double last_residual() const { return last_residual_; }

  /// A[(u, z), (u, -z)] and ||u||_omega^2 + ||u||_V^2 + ||z||_W^2 (+ divergence
  /// energy when augmented) for full-space coefficient vectors.
  std::pair<double, double> inf_sup_identity(const Vector& u, const Vector& z) const;

  ConditionEstimate condition_estimate(int max_iterations = 400, double tolerance = 1e-4);

  Vector reduce(const Vector& u, const Vector& z) const;
  Solution expand(const Vector& x) const;

 private:
  struct Factorization;
  void use_lu(Factorization& f) const;

  SystemBlocks blocks_;
  SystemOptions options_;
  Index num_full_ = 0;
  std::vector<Index> primal_free_, primal_fixed_, dual_free_;
  Vector prescribed_u_;
  SparseMatrix matrix_;
  SparseMatrix primal_coupling_;  // columns of fixed primal dofs, for elimination
  Vector rhs_;
  std::unique_ptr<Factorization> factorization_;
  double last_residual_ = 0.0;
};

/// Assembles the optimality system and its right-hand side.
SaddleSystem build_system(const FESpace& space, const MaterialModel& material, const StabilizationParams& params,
                          const ProblemData& data, const SystemOptions& options);

/// Power / inverse iteration estimate of sigma_max / sigma_min for a square matrix.
ConditionEstimate condition_estimate(const SparseMatrix& a, int max_iterations = 400, double tolerance = 1e-4);

/// MatrixMarket coordinate export.
void write_matrix_market(const std::string& path, const SparseMatrix& a);

}  // namespace ucfem
