#pragma once

// Robin and Dirichlet Laplacians on node-centred grids, quadrature, and the
// sparse solves shared by the elliptic and parabolic code.

#include "robinlab/grid.hpp"

#include <Eigen/SparseCore>

#include <memory>

namespace robinlab {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Discrete u -> -Δu with ∂u/∂ν + βu = 0 folded into the boundary rows.
///
/// At a boundary node the ghost value u_ghost = u_inner - 2 h β u_node is
/// substituted into the centred second difference of each axis whose normal
/// the node carries; a rectangle corner applies the relation on both axes.
/// With D = diag(weights), symmetrized() = D * matrix() is symmetric and
/// ½ uᵀ D A u = ½∫|∇u|² + (β/2)∮u² under trapezoidal quadrature.
class RobinOperator {
 public:
  RobinOperator(GridPtr grid, double beta);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  double beta() const noexcept { return beta_; }
  /// beta == 0 is the Neumann operator; constants are in its kernel.
  bool singular() const noexcept { return beta_ == 0.0; }

  const SparseMatrix& matrix() const noexcept { return matrix_; }
  const SparseMatrix& symmetrized() const noexcept { return symmetrized_; }

  Eigen::VectorXd apply(const Eigen::VectorXd& u) const { return matrix_ * u; }

 private:
  GridPtr grid_;
  double beta_;
  SparseMatrix matrix_;
  SparseMatrix symmetrized_;
};

/// Discrete -Δ with u = 0 on ∂Ω: boundary rows are identity rows and the
/// right-hand side is ignored there.
class DirichletOperator {
 public:
  explicit DirichletOperator(GridPtr grid);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const SparseMatrix& matrix() const noexcept { return matrix_; }
  /// Symmetric positive definite form used for the factorization.
  const SparseMatrix& symmetrized() const noexcept { return symmetrized_; }

 private:
  GridPtr grid_;
  SparseMatrix matrix_;
  SparseMatrix symmetrized_;
};

RobinOperator assemble_robin(GridPtr grid, double beta);
DirichletOperator assemble_dirichlet(GridPtr grid);

struct LinearSolverOptions {
  /// Grids with more cells per axis than this use preconditioned CG.
  int direct_limit = 512;
  double tolerance = 1e-10;
  int max_cg_iterations = 20000;
};

/// Factorization of a symmetric positive definite sparse matrix. Read-only
/// after construction, so one instance may serve concurrent solves.
class SpdFactorization {
 public:
  SpdFactorization(const SparseMatrix& matrix, bool iterative, int max_iterations = 20000);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  bool iterative() const noexcept;

 private:
  struct Impl;
  std::shared_ptr<const Impl> impl_;
};

/// Solves op·u = rhs and verifies ‖op·u − rhs‖∞ ≤ tol·(1 + ‖rhs‖∞),
/// refining iteratively when the first solve falls short. When |op|·|u| is so
/// large that rounding alone exceeds that bound, the rounding floor is used.
class LinearSolver {
 public:
  explicit LinearSolver(const RobinOperator& op, const LinearSolverOptions& opts = {});
  explicit LinearSolver(const DirichletOperator& op, const LinearSolverOptions& opts = {});

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;
  ScalarField solve(const ScalarField& rhs) const;

 private:
  GridPtr grid_;
  SparseMatrix strong_;
  SparseMatrix abs_strong_;
  Eigen::VectorXd weights_;
  Eigen::VectorXd rhs_mask_;
  SpdFactorization factor_;
  double tolerance_;
};

ScalarField solve_linear(const RobinOperator& op, const ScalarField& rhs);
ScalarField solve_linear(const DirichletOperator& op, const ScalarField& rhs);

/// Trapezoidal ∮ a b ds over the boundary nodes.
double boundary_integral(const ScalarField& a, const ScalarField& b);
/// Trapezoidal ∫ u dx; exact for constants.
double domain_integral(const ScalarField& u);

/// Weighted inner product Σ w_i a_i b_i.
double weighted_dot(const Grid& grid, const Eigen::VectorXd& a, const Eigen::VectorXd& b);

}  // namespace robinlab
