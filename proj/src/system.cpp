#include "ucfem/system.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>

namespace ucfem {

// The reduced matrix is symmetric quasi-definite, so LDL^T exists for any
// symmetric ordering. It is factorized after symmetric row equilibration
// S K S with S = diag(max_j |K_ij|)^(-1/2); without it the higher-order
// systems lose digits to the spread between the penalty and operator blocks.
// LU is kept as a fallback when the residual gate fails.
struct SaddleSystem::Factorization {
  Vector scale;
  SparseMatrix scaled;
  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Lower, Eigen::AMDOrdering<int>> ldlt;
  std::unique_ptr<Eigen::SparseLU<SparseMatrix>> lu;

  Vector solve(const Vector& b) const {
    const Vector sb = scale.cwiseProduct(b);
    return scale.cwiseProduct(lu ? Vector(lu->solve(sb)) : Vector(ldlt.solve(sb)));
  }
};

namespace {

// Submatrix a[rows, cols] given index lists into a.
SparseMatrix extract(const SparseMatrix& a, const std::vector<Index>& rows, const std::vector<Index>& cols) {
  std::vector<Index> rmap(static_cast<std::size_t>(a.rows()), -1), cmap(static_cast<std::size_t>(a.cols()), -1);
  for (std::size_t i = 0; i < rows.size(); ++i) rmap[static_cast<std::size_t>(rows[i])] = static_cast<Index>(i);
  for (std::size_t i = 0; i < cols.size(); ++i) cmap[static_cast<std::size_t>(cols[i])] = static_cast<Index>(i);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(a.nonZeros()));
  for (Eigen::Index c = 0; c < a.outerSize(); ++c) {
    const Index cc = cmap[static_cast<std::size_t>(c)];
    if (cc < 0) continue;
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) {
      const Index rr = rmap[static_cast<std::size_t>(it.row())];
      if (rr >= 0) t.emplace_back(rr, cc, it.value());
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

// Full 2N x 2N block matrix [[P, B^T], [B, -S]].
SparseMatrix full_matrix(const SystemBlocks& b) {
  SparseMatrix p = b.omega_mass + b.s_gamma + b.s_alpha;
  if (b.div.size() > 0) p += b.div;
  const SparseMatrix coupling = b.a_h + b.s_beta;
  const Index n = p.rows();
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(p.nonZeros() + 2 * coupling.nonZeros() + b.s_star.nonZeros()));
  const auto add = [&t](const SparseMatrix& m, Index r0, Index c0, double s, bool transpose) {
    for (Eigen::Index c = 0; c < m.outerSize(); ++c)
      for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
        if (transpose) t.emplace_back(r0 + it.col(), c0 + it.row(), s * it.value());
        else t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
      }
  };
  add(p, 0, 0, 1.0, false);
  add(coupling, 0, n, 1.0, true);
  add(coupling, n, 0, 1.0, false);
  add(b.s_star, n, n, -1.0, false);
  SparseMatrix out(2 * n, 2 * n);
  out.setFromTriplets(t.begin(), t.end());
  out.makeCompressed();
  return out;
}

constexpr double kResidualTarget = 1e-8;
constexpr double kResidualFloor = 1e-15;
constexpr int kMaxRefinement = 3;

double inf_norm(const Vector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

Vector random_unit(Index n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = static_cast<double>(rng() >> 11) * 0x1.0p-53 + 0.5;
  return v / v.norm();
}

template <class Apply, class ApplyInverse>
ConditionEstimate estimate_condition(Index n, Apply&& apply_normal, ApplyInverse&& apply_inverse_normal,
                                     int max_iterations, double tolerance) {
  ConditionEstimate est;
  // apply_normal(v) returns (A^T A v, ||A v||); apply_inverse_normal(v) returns (A^-1 A^-T v, ||A^-T v||)
  Vector v = random_unit(n, 0x5eed);
  double prev = 0.0;
  bool top_ok = false, bottom_ok = false;
  int it = 0;
  for (; it < max_iterations; ++it) {
    auto [w, norm_av] = apply_normal(v);
    est.sigma_max = norm_av;
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    if (it > 0 && std::abs(est.sigma_max - prev) <= tolerance * est.sigma_max) {
      top_ok = true;
      break;
    }
    prev = est.sigma_max;
  }
  est.iterations = it;
  v = random_unit(n, 0xfeed);
  prev = 0.0;
  for (it = 0; it < max_iterations; ++it) {
    auto [w, norm_inv] = apply_inverse_normal(v);
    est.sigma_min = norm_inv > 0.0 ? 1.0 / norm_inv : 0.0;
    const double wn = w.norm();
    if (wn == 0.0) break;
    v = w / wn;
    if (it > 0 && std::abs(est.sigma_min - prev) <= tolerance * est.sigma_min) {
      bottom_ok = true;
      break;
    }
    prev = est.sigma_min;
  }
  est.iterations = std::max(est.iterations, it);
  est.converged = top_ok && bottom_ok;
  est.kappa = est.sigma_min > 0.0 ? est.sigma_max / est.sigma_min : INFINITY;
  return est;
}

}  // namespace

SaddleSystem::SaddleSystem(const FESpace& space, SystemBlocks blocks, const SystemOptions& options)
    : blocks_(std::move(blocks)), options_(options), num_full_(space.dofs().num_vector()) {
  const auto& dm = space.dofs();
  std::vector<char> boundary(static_cast<std::size_t>(num_full_), 0);
  for (Index i : dm.boundary_vector_dofs()) boundary[static_cast<std::size_t>(i)] = 1;
  for (Index i = 0; i < num_full_; ++i) {
    const bool fixed_primal = options_.kind == ProblemKind::well_posed_dirichlet && boundary[static_cast<std::size_t>(i)];
    (fixed_primal ? primal_fixed_ : primal_free_).push_back(i);
    if (!boundary[static_cast<std::size_t>(i)]) dual_free_.push_back(num_full_ + i);
  }
  std::vector<Index> free = primal_free_;
  free.insert(free.end(), dual_free_.begin(), dual_free_.end());
  const SparseMatrix full = full_matrix(blocks_);
  matrix_ = extract(full, free, free);
  primal_coupling_ = extract(full, free, primal_fixed_);
  prescribed_u_ = Vector::Zero(num_full_);
  rhs_ = Vector::Zero(matrix_.rows());
}

SaddleSystem::~SaddleSystem() = default;
SaddleSystem::SaddleSystem(SaddleSystem&&) noexcept = default;
SaddleSystem& SaddleSystem::operator=(SaddleSystem&&) noexcept = default;

void SaddleSystem::set_rhs(const Vector& primal_load, const Vector& dual_load, const Vector& prescribed_u) {
  prescribed_u_ = prescribed_u;
  Vector b(matrix_.rows());
  Index k = 0;
  for (Index i : primal_free_) b(k++) = primal_load(i);
  for (Index i : dual_free_) b(k++) = dual_load(i - num_full_);
  if (!primal_fixed_.empty()) {
    Vector fixed(static_cast<Eigen::Index>(primal_fixed_.size()));
    for (std::size_t i = 0; i < primal_fixed_.size(); ++i) fixed(static_cast<Eigen::Index>(i)) = prescribed_u(primal_fixed_[i]);
    b -= primal_coupling_ * fixed;
  }
  rhs_ = std::move(b);
}

void SaddleSystem::factorize() {
  if (factorization_) return;
  auto f = std::make_unique<Factorization>();
  f->scale = Vector::Zero(matrix_.rows());
  for (Eigen::Index c = 0; c < matrix_.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(matrix_, c); it; ++it)
      f->scale(it.row()) = std::max(f->scale(it.row()), std::abs(it.value()));
  for (Eigen::Index i = 0; i < f->scale.size(); ++i)
    f->scale(i) = f->scale(i) > 0.0 ? 1.0 / std::sqrt(f->scale(i)) : 1.0;
  f->scaled = f->scale.asDiagonal() * matrix_ * f->scale.asDiagonal();
  f->ldlt.compute(f->scaled);
  if (f->ldlt.info() != Eigen::Success) use_lu(*f);
  factorization_ = std::move(f);
}

void SaddleSystem::use_lu(Factorization& f) const {
  f.lu = std::make_unique<Eigen::SparseLU<SparseMatrix>>(f.scaled);
  if (f.lu->info() != Eigen::Success) throw SolverError("sparse factorization failed (singular system matrix)");
}

Vector SaddleSystem::solve_reduced(const Vector& b) {
  factorize();
  if (inf_norm(b) == 0.0) {
    last_residual_ = 0.0;
    return Vector::Zero(b.size());
  }
  const auto attempt = [&]() {
    Vector x = factorization_->solve(b);
    Vector r = b - matrix_ * x;
    last_residual_ = inf_norm(r) / inf_norm(b);
    // Refine while it still pays off; on the badly conditioned higher-order
    // systems this improves the solution even below the residual target.
    for (int step = 0; step < kMaxRefinement && last_residual_ > kResidualFloor; ++step) {
      const Vector candidate = x + factorization_->solve(r);
      const Vector rc = b - matrix_ * candidate;
      const double res = inf_norm(rc) / inf_norm(b);
      if (res >= last_residual_) break;
      x = candidate;
      r = rc;
      last_residual_ = res;
    }
    return x;
  };
  Vector x = attempt();
  if (last_residual_ > kResidualTarget && !factorization_->lu) {
    use_lu(*factorization_);
    x = attempt();
  }
  return x;
}

Solution SaddleSystem::solve() { return expand(solve_reduced(rhs_)); }

Vector SaddleSystem::reduce(const Vector& u, const Vector& z) const {
  Vector x(matrix_.rows());
  Index k = 0;
  for (Index i : primal_free_) x(k++) = u(i);
  for (Index i : dual_free_) x(k++) = z(i - num_full_);
  return x;
}

Solution SaddleSystem::expand(const Vector& x) const {
  Solution s{prescribed_u_, Vector::Zero(num_full_)};
  Index k = 0;
  for (Index i : primal_free_) s.u(i) = x(k++);
  for (Index i : dual_free_) s.z(i - num_full_) = x(k++);
  return s;
}

std::pair<double, double> SaddleSystem::inf_sup_identity(const Vector& u, const Vector& z) const {
  const Vector x = reduce(u, z);
  Vector x_test = x;
  x_test.tail(num_dual()) *= -1.0;
  const double lhs = x_test.dot(matrix_ * x);

  Solution restricted{Vector::Zero(num_full_), Vector::Zero(num_full_)};
  Index k = 0;
  for (Index i : primal_free_) restricted.u(i) = x(k++);
  for (Index i : dual_free_) restricted.z(i - num_full_) = x(k++);
  const Vector& uu = restricted.u;
  const Vector& zz = restricted.z;
  double rhs = uu.dot(blocks_.omega_mass * uu) + uu.dot(blocks_.s_gamma * uu) + uu.dot(blocks_.s_alpha * uu) +
               zz.dot(blocks_.s_star * zz);
  if (blocks_.div.size() > 0) rhs += uu.dot(blocks_.div * uu);
  return {lhs, rhs};
}

ConditionEstimate SaddleSystem::condition_estimate(int max_iterations, double tolerance) {
  factorize();
  const auto& a = matrix_;
  const Factorization& lu = *factorization_;
  // The reduced matrix is symmetric, so A^T = A and A^-T = A^-1.
  return estimate_condition(
      a.rows(),
      [&](const Vector& v) {
        const Vector av = a * v;
        return std::pair<Vector, double>{a * av, av.norm()};
      },
      [&](const Vector& v) {
        const Vector y = lu.solve(v);
        return std::pair<Vector, double>{lu.solve(y), y.norm()};
      },
      max_iterations, tolerance);
}

ConditionEstimate condition_estimate(const SparseMatrix& a, int max_iterations, double tolerance) {
  if (a.rows() != a.cols()) throw SolverError("condition estimate needs a square matrix");
  SparseMatrix at = a.transpose();
  Eigen::SparseLU<SparseMatrix> lu(a), lut(at);
  if (lu.info() != Eigen::Success || lut.info() != Eigen::Success) throw SolverError("factorization failed");
  return estimate_condition(
      a.rows(),
      [&](const Vector& v) {
        const Vector av = a * v;
        return std::pair<Vector, double>{at * av, av.norm()};
      },
      [&](const Vector& v) {
        const Vector y = lut.solve(v);  // A^-T v
        return std::pair<Vector, double>{lu.solve(y), y.norm()};
      },
      max_iterations, tolerance);
}

SaddleSystem build_system(const FESpace& space, const MaterialModel& material, const StabilizationParams& params,
                          const ProblemData& data, const SystemOptions& options) {
  const int p = space.degree();
  params.validate(p, material.globally_smooth());
  if (options.data == DataKind::perturbed && !data.perturbation)
    throw std::invalid_argument("perturbed data requested without a perturbation");
  if (options.kind == ProblemKind::well_posed_dirichlet && !data.dirichlet)
    throw std::invalid_argument("well-posed problem needs Dirichlet data");
  if (options.divergence_augmentation && !data.divergence)
    throw std::invalid_argument("divergence augmentation needs divergence data");

  SystemBlocks b;
  b.omega_mass = assemble_omega_mass(space);
  b.s_gamma = params.gamma_gls * assemble_gls(space, material);
  b.s_beta = SparseMatrix(b.s_gamma.rows(), b.s_gamma.cols());
  for (int j = 1; j <= p; ++j) {
    const double g = params.gamma[static_cast<std::size_t>(j - 1)], be = params.beta[static_cast<std::size_t>(j - 1)];
    if (g == 0.0 && be == 0.0) continue;
    const SparseMatrix jj = assemble_jump(space, material, j);
    if (g != 0.0) b.s_gamma += g * jj;
    if (be != 0.0) b.s_beta += be * jj;
  }
  b.s_alpha = assemble_tikhonov(space, params.alpha);
  b.a_h = assemble_a_h(space, material);
  b.s_star = assemble_dual_laplacian(space);
  if (options.divergence_augmentation) b.div = assemble_div_matrix(space);

  Vector primal = assemble_omega_rhs(space, data.u_omega) + params.gamma_gls * assemble_gls_rhs(space, material, data.f);
  Vector dual = assemble_load(space, data.f);
  if (options.divergence_augmentation) primal += assemble_div_rhs(space, data.divergence);
  if (options.data == DataKind::perturbed) {
    const Perturbation& pert = *data.perturbation;
    primal += b.omega_mass * pert.delta_u +
              params.gamma_gls * assemble_gls_rhs(space, material, fe_field(space, pert.delta_f));
    dual += assemble_mass(space) * pert.delta_f;
  }
  Vector prescribed = Vector::Zero(space.dofs().num_vector());
  if (options.kind == ProblemKind::well_posed_dirichlet) {
    const Vector trace = interpolate(space, data.dirichlet);
    for (Index i : space.dofs().boundary_vector_dofs()) prescribed(i) = trace(i);
  }

  SaddleSystem sys(space, std::move(b), options);
  sys.set_rhs(primal, dual, prescribed);
  return sys;
}

void write_matrix_market(const std::string& path, const SparseMatrix& a) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << a.rows() << ' ' << a.cols() << ' ' << a.nonZeros() << '\n';
  os.precision(17);
  for (Eigen::Index c = 0; c < a.outerSize(); ++c)
    for (SparseMatrix::InnerIterator it(a, c); it; ++it) os << it.row() + 1 << ' ' << it.col() + 1 << ' ' << it.value() << '\n';
}

}  // namespace ucfem
