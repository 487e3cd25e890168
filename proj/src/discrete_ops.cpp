#include "robinlab/discrete_ops.hpp"

#include "robinlab/error.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>

#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace robinlab {

namespace {

using Triplet = Eigen::Triplet<double>;

Eigen::VectorXd weight_vector(const Grid& grid) {
  const auto w = grid.weights();
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

// One axis of the second difference at node k with position i along the axis.
// `stride` steps to the neighbour along that axis.
void axis_stencil(std::vector<Triplet>& out, std::size_t k, std::size_t i, std::size_t last,
                  std::size_t stride, double h, double beta) {
  const auto row = static_cast<int>(k);
  const double inv_h2 = 1.0 / (h * h);
  if (i == 0) {
    out.emplace_back(row, row, (2.0 + 2.0 * h * beta) * inv_h2);
    out.emplace_back(row, static_cast<int>(k + stride), -2.0 * inv_h2);
  } else if (i == last) {
    out.emplace_back(row, row, (2.0 + 2.0 * h * beta) * inv_h2);
    out.emplace_back(row, static_cast<int>(k - stride), -2.0 * inv_h2);
  } else {
    out.emplace_back(row, row, 2.0 * inv_h2);
    out.emplace_back(row, static_cast<int>(k - stride), -inv_h2);
    out.emplace_back(row, static_cast<int>(k + stride), -inv_h2);
  }
}

SparseMatrix row_scaled(const SparseMatrix& m, const Eigen::VectorXd& w) {
  SparseMatrix out = w.asDiagonal() * m;
  out.makeCompressed();
  return out;
}

}  // namespace

RobinOperator::RobinOperator(GridPtr grid, double beta) : grid_(std::move(grid)), beta_(beta) {
  require(grid_ != nullptr, ErrorCode::InvalidArgument, "operator without a grid");
  require(std::isfinite(beta) && beta >= 0.0, ErrorCode::InvalidArgument,
          "Robin coefficient beta must be >= 0");
  const Grid& g = *grid_;
  const std::size_t n = g.node_count();
  const std::size_t last = static_cast<std::size_t>(g.cells_per_axis());
  std::vector<Triplet> trip;
  trip.reserve(n * (g.dimension() == 1 ? 3 : 6));
  for (std::size_t k = 0; k < n; ++k) {
    axis_stencil(trip, k, g.ix(k), last, 1, g.hx(), beta_);
    if (g.dimension() == 2) axis_stencil(trip, k, g.iy(k), last, g.nodes_per_axis(), g.hy(), beta_);
  }
  matrix_.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  matrix_.setFromTriplets(trip.begin(), trip.end());
  matrix_.makeCompressed();
  symmetrized_ = row_scaled(matrix_, weight_vector(g));
}

DirichletOperator::DirichletOperator(GridPtr grid) : grid_(std::move(grid)) {
  require(grid_ != nullptr, ErrorCode::InvalidArgument, "operator without a grid");
  const Grid& g = *grid_;
  const std::size_t n = g.node_count();
  const std::size_t last = static_cast<std::size_t>(g.cells_per_axis());
  std::vector<Triplet> interior;
  for (std::size_t k = 0; k < n; ++k) {
    if (g.is_boundary(k)) continue;
    axis_stencil(interior, k, g.ix(k), last, 1, g.hx(), 0.0);
    if (g.dimension() == 2) axis_stencil(interior, k, g.iy(k), last, g.nodes_per_axis(), g.hy(), 0.0);
  }
  std::vector<Triplet> full;
  std::vector<Triplet> sym;
  const Eigen::VectorXd w = weight_vector(g);
  for (const auto& t : interior) {
    full.push_back(t);
    // Boundary values are zero, so their columns drop out of the solve.
    if (!g.is_boundary(static_cast<std::size_t>(t.col())))
      sym.emplace_back(t.row(), t.col(), w[t.row()] * t.value());
  }
  for (const auto& b : g.boundary()) {
    full.emplace_back(static_cast<int>(b.index), static_cast<int>(b.index), 1.0);
    sym.emplace_back(static_cast<int>(b.index), static_cast<int>(b.index), 1.0);
  }
  const auto dim = static_cast<Eigen::Index>(n);
  matrix_.resize(dim, dim);
  matrix_.setFromTriplets(full.begin(), full.end());
  matrix_.makeCompressed();
  symmetrized_.resize(dim, dim);
  symmetrized_.setFromTriplets(sym.begin(), sym.end());
  symmetrized_.makeCompressed();
}

RobinOperator assemble_robin(GridPtr grid, double beta) { return RobinOperator(std::move(grid), beta); }
DirichletOperator assemble_dirichlet(GridPtr grid) { return DirichletOperator(std::move(grid)); }

// ---------------------------------------------------------------------------

struct SpdFactorization::Impl {
  bool iterative = false;
  Eigen::SimplicialLDLT<SparseMatrix> direct;
  Eigen::ConjugateGradient<SparseMatrix, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
};

SpdFactorization::SpdFactorization(const SparseMatrix& matrix, bool iterative, int max_iterations) {
  auto impl = std::make_shared<Impl>();
  impl->iterative = iterative;
  if (iterative) {
    impl->cg.setTolerance(1e-14);
    impl->cg.setMaxIterations(max_iterations);
    impl->cg.compute(matrix);
    require(impl->cg.info() == Eigen::Success, ErrorCode::SolverFailure,
            "incomplete Cholesky preconditioner failed");
  } else {
    impl->direct.compute(matrix);
    require(impl->direct.info() == Eigen::Success, ErrorCode::SingularOperator,
            "sparse LDLT factorization failed (matrix singular or indefinite)");
    const auto d = impl->direct.vectorD();
    for (Eigen::Index i = 0; i < d.size(); ++i)
      require(d[i] > 0.0 && std::isfinite(d[i]), ErrorCode::SingularOperator,
              "matrix is not positive definite (pivot " + std::to_string(i) + ")");
  }
  impl_ = std::move(impl);
}

bool SpdFactorization::iterative() const noexcept { return impl_->iterative; }

Eigen::VectorXd SpdFactorization::solve(const Eigen::VectorXd& rhs) const {
  if (!impl_->iterative) return impl_->direct.solve(rhs);
  Eigen::VectorXd x = impl_->cg.solve(rhs);
  require(impl_->cg.info() == Eigen::Success, ErrorCode::SolverFailure,
          "conjugate gradient did not converge within " + std::to_string(impl_->cg.maxIterations()) +
              " iterations");
  return x;
}

// ---------------------------------------------------------------------------

namespace {

bool use_iterative(const Grid& g, const LinearSolverOptions& opts) {
  return g.cells_per_axis() > opts.direct_limit;
}

const SparseMatrix& nonsingular_form(const RobinOperator& op) {
  require(!op.singular(), ErrorCode::SingularOperator,
          "Robin operator with beta = 0 is singular (Neumann kernel)");
  return op.symmetrized();
}

}  // namespace

LinearSolver::LinearSolver(const RobinOperator& op, const LinearSolverOptions& opts)
    : grid_(op.grid_ptr()),
      strong_(op.matrix()),
      abs_strong_(op.matrix().cwiseAbs()),
      weights_(weight_vector(op.grid())),
      rhs_mask_(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(op.grid().node_count()))),
      factor_(nonsingular_form(op), use_iterative(op.grid(), opts), opts.max_cg_iterations),
      tolerance_(opts.tolerance) {}

LinearSolver::LinearSolver(const DirichletOperator& op, const LinearSolverOptions& opts)
    : grid_(op.grid_ptr()),
      strong_(op.matrix()),
      abs_strong_(op.matrix().cwiseAbs()),
      weights_(weight_vector(op.grid())),
      rhs_mask_(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(op.grid().node_count()))),
      factor_(op.symmetrized(), use_iterative(op.grid(), opts), opts.max_cg_iterations),
      tolerance_(opts.tolerance) {
  for (const auto& b : op.grid().boundary()) {
    rhs_mask_[static_cast<Eigen::Index>(b.index)] = 0.0;
    weights_[static_cast<Eigen::Index>(b.index)] = 1.0;
  }
}

Eigen::VectorXd LinearSolver::solve(const Eigen::VectorXd& rhs_in) const {
  require(rhs_in.size() == strong_.rows(), ErrorCode::InvalidArgument, "right-hand side has wrong length");
  const Eigen::VectorXd rhs = rhs_in.cwiseProduct(rhs_mask_);
  const double requested = tolerance_ * (1.0 + rhs.lpNorm<Eigen::Infinity>());
  Eigen::VectorXd u = factor_.solve(weights_.cwiseProduct(rhs));
  double res = 0.0;
  double limit = requested;
  for (int pass = 0; pass < 4; ++pass) {
    const Eigen::VectorXd r = strong_ * u - rhs;
    res = r.lpNorm<Eigen::Infinity>();
    if (!std::isfinite(res)) break;
    // Never demand less than the rounding floor of evaluating the residual itself.
    const double floor = 16.0 * std::numeric_limits<double>::epsilon() * (abs_strong_ * u.cwiseAbs()).lpNorm<Eigen::Infinity>();
    limit = std::max(requested, floor);
    if (res <= limit) return u;
    u -= factor_.solve(weights_.cwiseProduct(r));
  }
  std::ostringstream os;
  os << "linear solve residual " << res << " exceeds " << limit;
  fail(ErrorCode::SolverFailure, os.str());
}

ScalarField LinearSolver::solve(const ScalarField& rhs) const {
  require_same_grid(*grid_, rhs.grid(), "solve_linear");
  return ScalarField(grid_, solve(Eigen::VectorXd(rhs.vec())));
}

ScalarField solve_linear(const RobinOperator& op, const ScalarField& rhs) {
  return LinearSolver(op).solve(rhs);
}

ScalarField solve_linear(const DirichletOperator& op, const ScalarField& rhs) {
  return LinearSolver(op).solve(rhs);
}

double boundary_integral(const ScalarField& a, const ScalarField& b) {
  require_same_grid(a.grid(), b.grid(), "boundary_integral");
  const auto bw = a.grid().boundary_weights();
  double s = 0.0;
  for (const auto& node : a.grid().boundary()) s += bw[node.index] * a[node.index] * b[node.index];
  return s;
}

double domain_integral(const ScalarField& u) {
  const auto w = u.grid().weights();
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += w[i] * u[i];
  return s;
}

double weighted_dot(const Grid& grid, const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  const auto w = grid.weights();
  double s = 0.0;
  for (Eigen::Index i = 0; i < a.size(); ++i) s += w[static_cast<std::size_t>(i)] * a[i] * b[i];
  return s;
}

}  // namespace robinlab
