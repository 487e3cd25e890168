#include "robinlab/elliptic.hpp"

#include "robinlab/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace robinlab {

namespace {

double gershgorin_lower_bound(const SparseMatrix& m) {
  std::vector<double> diag(static_cast<std::size_t>(m.rows()), 0.0);
  std::vector<double> off(static_cast<std::size_t>(m.rows()), 0.0);
  for (Eigen::Index c = 0; c < m.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(m, c); it; ++it) {
      const auto r = static_cast<std::size_t>(it.row());
      if (it.row() == it.col())
        diag[r] += it.value();
      else
        off[r] += std::abs(it.value());
    }
  }
  double lb = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < diag.size(); ++i) lb = std::min(lb, diag[i] - off[i]);
  return lb;
}

}  // namespace

SparseMatrix linearized_operator(const ProblemSpec& spec, const ScalarField& U) {
  require_same_grid(*spec.grid, U.grid(), "linearized_operator");
  const RobinOperator op(spec.grid, spec.beta);
  const auto n = static_cast<Eigen::Index>(U.size());
  std::vector<Eigen::Triplet<double>> potential;
  potential.reserve(U.size());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double u = U[static_cast<std::size_t>(i)];
    potential.emplace_back(i, i, u > 0.0 ? spec.p * std::pow(u, spec.p - 1.0) : 0.0);
  }
  SparseMatrix V(n, n);
  V.setFromTriplets(potential.begin(), potential.end());
  SparseMatrix L = op.matrix() - V;
  L.makeCompressed();
  return L;
}

EigenReport linearized_eigen(const ProblemSpec& spec, const ScalarField& U, const EigenOptions& opts) {
  require_same_grid(*spec.grid, U.grid(), "linearized_eigen");
  require(U.min() >= -1e-10, ErrorCode::InvalidArgument, "linearized_eigen: U must be nonnegative");
  require(spec.beta > 0.0, ErrorCode::InvalidArgument, "linearized_eigen needs beta > 0");
  const auto wspan = spec.grid->weights();
  const Eigen::VectorXd w = Eigen::Map<const Eigen::VectorXd>(wspan.data(), static_cast<Eigen::Index>(wspan.size()));

  const SparseMatrix L = linearized_operator(spec, U);
  const double sigma = gershgorin_lower_bound(L) - 1.0;
  SparseMatrix K = w.asDiagonal() * L;
  SparseMatrix shifted = K;
  for (Eigen::Index i = 0; i < w.size(); ++i) shifted.coeffRef(i, i) -= sigma * w[i];
  shifted.makeCompressed();
  const SpdFactorization factor(shifted, spec.grid->cells_per_axis() > LinearSolverOptions{}.direct_limit);

  Eigen::VectorXd x = Eigen::VectorXd::Ones(w.size());
  double lambda = 0.0;
  double residual = std::numeric_limits<double>::infinity();
  int it = 0;
  for (it = 1; it <= opts.max_iter; ++it) {
    x = factor.solve(w.cwiseProduct(x));
    if (x.sum() < 0.0) x = -x;
    x /= x.lpNorm<Eigen::Infinity>();
    const Eigen::VectorXd Lx = L * x;
    lambda = x.dot(w.cwiseProduct(Lx)) / x.dot(w.cwiseProduct(x));
    residual = (Lx - lambda * x).lpNorm<Eigen::Infinity>();
    require(std::isfinite(residual), ErrorCode::NonFinite, "linearized_eigen: iteration produced non-finite values");
    if (residual <= opts.residual_tol) break;
  }
  require(residual <= 1e-8, ErrorCode::Stagnation,
          "linearized_eigen: inverse iteration stagnated at residual " + std::to_string(residual));
  return EigenReport{lambda, ScalarField(spec.grid, x), std::min(it, opts.max_iter), residual};
}

}  // namespace robinlab
