#include "robinlab/elliptic.hpp"

#include "robinlab/error.hpp"

#include <Eigen/SparseLU>

#include <cmath>
#include <limits>

namespace robinlab {

namespace {

double positive_power(double u, double p) { return u > 0.0 ? std::pow(u, p) : 0.0; }

Eigen::VectorXd weight_vector(const Grid& g) {
  const auto w = g.weights();
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

double inf_norm(const Eigen::VectorXd& v) { return v.size() ? v.lpNorm<Eigen::Infinity>() : 0.0; }

}  // namespace

const char* to_string(SolveStatus status) noexcept {
  switch (status) {
    case SolveStatus::Converged: return "Converged";
    case SolveStatus::Diverged: return "Diverged";
    case SolveStatus::MaxIter: return "MaxIter";
  }
  return "unknown";
}

Eigen::VectorXd reaction(const ProblemSpec& spec, const Eigen::VectorXd& u) {
  Eigen::VectorXd out(u.size());
  for (Eigen::Index i = 0; i < u.size(); ++i)
    out[i] = positive_power(u[i], spec.p) + spec.f[static_cast<std::size_t>(i)];
  return out;
}

Eigen::VectorXd weighted_residual(const ProblemSpec& spec, const RobinOperator& op,
                                  const Eigen::VectorXd& u) {
  return op.symmetrized() * u - weight_vector(*spec.grid).cwiseProduct(reaction(spec, u));
}

ScalarField stationary_residual(const ProblemSpec& spec, const ScalarField& u) {
  require_same_grid(*spec.grid, u.grid(), "stationary_residual");
  const RobinOperator op(spec.grid, spec.beta);
  const Eigen::VectorXd v = u.vec();
  return ScalarField(spec.grid, Eigen::VectorXd(op.apply(v) - reaction(spec, v)));
}

SolveReport monotone_iterate(const ProblemSpec& spec, const MonotoneOptions& opts) {
  require(spec.beta > 0.0, ErrorCode::InvalidArgument, "monotone_iterate needs beta > 0");
  require(opts.max_iter > 0 && opts.divergence_cap > 0.0, ErrorCode::InvalidArgument,
          "monotone_iterate: caps must be positive");
  const RobinOperator op(spec.grid, spec.beta);
  const LinearSolver solver(op);
  const auto n = static_cast<Eigen::Index>(spec.grid->node_count());

  SolveReport report;
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n);
  double prev_increment = 0.0;
  for (int j = 1; j <= opts.max_iter; ++j) {
    const Eigen::VectorXd next = solver.solve(reaction(spec, u));
    const double increment = inf_norm(next - u);
    const double norm = inf_norm(next);
    for (Eigen::Index i = 0; i < n; ++i)
      if (next[i] < u[i] - opts.ordering_slack) ++report.monotone_violations;

    double residual = std::numeric_limits<double>::quiet_NaN();
    report.iterations = j;
    if (increment < opts.tol_increment) {
      residual = inf_norm(weighted_residual(spec, op, next));
      if (residual < opts.tol_residual) {
        report.history.push_back({j, norm, increment, residual});
        report.status = SolveStatus::Converged;
        report.residual_inf = residual;
        report.solution.emplace(spec.grid, next);
        return report;
      }
    }
    report.history.push_back({j, norm, increment, residual});
    if (norm > opts.divergence_cap && (j == 1 || increment >= prev_increment)) {
      report.status = SolveStatus::Diverged;
      report.residual_inf = std::numeric_limits<double>::infinity();
      return report;
    }
    prev_increment = increment;
    u = next;
  }
  report.status = SolveStatus::MaxIter;
  report.residual_inf = inf_norm(weighted_residual(spec, op, u));
  report.solution.emplace(spec.grid, u);
  return report;
}

SparseMatrix newton_jacobian(const ProblemSpec& spec, const ScalarField& u) {
  require_same_grid(*spec.grid, u.grid(), "newton_jacobian");
  const RobinOperator op(spec.grid, spec.beta);
  Eigen::VectorXd slope(static_cast<Eigen::Index>(u.size()));
  for (std::size_t i = 0; i < u.size(); ++i)
    slope[static_cast<Eigen::Index>(i)] = spec.p * positive_power(u[i], spec.p - 1.0);
  SparseMatrix jac = op.matrix();
  for (Eigen::Index i = 0; i < slope.size(); ++i) jac.coeffRef(i, i) -= slope[i];
  jac.makeCompressed();
  return jac;
}

SolveReport newton_refine(const ProblemSpec& spec, const ScalarField& initial,
                          const NewtonOptions& opts) {
  require_same_grid(*spec.grid, initial.grid(), "newton_refine");
  require(spec.beta > 0.0, ErrorCode::InvalidArgument, "newton_refine needs beta > 0");
  require(initial.min() >= -opts.cone_slack, ErrorCode::InvalidArgument,
          "newton_refine: initial guess leaves the nonnegative cone");
  const RobinOperator op(spec.grid, spec.beta);
  const Eigen::VectorXd w = weight_vector(*spec.grid);

  SolveReport report;
  Eigen::VectorXd u = initial.vec();
  Eigen::VectorXd r = weighted_residual(spec, op, u);
  double rn = inf_norm(r);
  require(std::isfinite(rn), ErrorCode::NonFinite, "newton_refine: residual of initial guess is not finite");

  Eigen::SparseLU<SparseMatrix> lu;
  for (int k = 0;; ++k) {
    report.iterations = k;
    report.residual_inf = rn;
    if (rn <= opts.tol) {
      report.status = SolveStatus::Converged;
      report.solution.emplace(spec.grid, u);
      return report;
    }
    if (k == opts.max_iter) break;

    SparseMatrix jac = w.asDiagonal() * newton_jacobian(spec, ScalarField(spec.grid, u));
    jac.makeCompressed();
    lu.compute(jac);
    require(lu.info() == Eigen::Success, ErrorCode::SingularJacobian,
            "Newton Jacobian is singular (fold proximity): " + lu.lastErrorMessage());
    const Eigen::VectorXd delta = lu.solve(r);
    const double check = inf_norm(jac * delta - r);
    require(delta.allFinite() && check <= 1e-6 * (1.0 + rn), ErrorCode::SingularJacobian,
            "Newton Jacobian is numerically singular (fold proximity)");

    double t = 1.0;
    for (Eigen::Index i = 0; i < u.size(); ++i)
      if (delta[i] > 0.0 && u[i] - delta[i] < -opts.cone_slack)
        t = std::min(t, (u[i] + opts.cone_slack) / delta[i]);

    const double r2 = r.norm();
    Eigen::VectorXd trial = u - t * delta;
    Eigen::VectorXd r_trial = weighted_residual(spec, op, trial);
    for (int halving = 0; halving < 30 && !(r_trial.norm() <= (1.0 - 1e-4 * t) * r2); ++halving) {
      t *= 0.5;
      trial = u - t * delta;
      r_trial = weighted_residual(spec, op, trial);
    }
    const double step = t * inf_norm(delta);
    u = std::move(trial);
    r = std::move(r_trial);
    rn = inf_norm(r);
    require(std::isfinite(rn), ErrorCode::NonFinite, "newton_refine: residual became non-finite");
    report.history.push_back({k + 1, inf_norm(u), step, rn});
  }
  report.status = SolveStatus::MaxIter;
  report.solution.emplace(spec.grid, u);
  return report;
}

}  // namespace robinlab
