#include "robinlab/elliptic.hpp"

#include "robinlab/error.hpp"

#include <algorithm>
#include <cmath>

namespace robinlab {

namespace {

constexpr double kSeriesRatio = 1e-2;
constexpr int kSeriesTerms = 12;

// Σ_{k>=first} C(q,k) r^k
double binomial_tail(double q, double r, int first) {
  double coeff = 1.0;
  for (int k = 1; k < first; ++k) coeff *= (q - k + 1) / k;
  double rk = std::pow(r, first);
  double sum = 0.0;
  for (int k = first; k < first + kSeriesTerms; ++k) {
    coeff *= (q - k + 1) / k;
    sum += coeff * rk;
    rk *= r;
  }
  return sum;
}

}  // namespace

double pass_g(double U, double v, double p) {
  if (v <= 0.0) return 0.0;
  if (U <= 0.0) return std::pow(v, p);
  const double r = v / U;
  if (r < kSeriesRatio) return std::pow(U, p) * binomial_tail(p, r, 2);
  return std::pow(U + v, p) - std::pow(U, p) - p * std::pow(U, p - 1.0) * v;
}

double pass_G(double U, double v, double p) {
  if (v <= 0.0) return 0.0;
  if (U <= 0.0) return std::pow(v, p + 1.0) / (p + 1.0);
  const double r = v / U;
  if (r < kSeriesRatio) return std::pow(U, p + 1.0) * binomial_tail(p + 1.0, r, 3) / (p + 1.0);
  return (std::pow(U + v, p + 1.0) - std::pow(U, p + 1.0)) / (p + 1.0) - std::pow(U, p) * v -
         0.5 * p * std::pow(U, p - 1.0) * v * v;
}

PassFunctional::PassFunctional(const ProblemSpec& spec, const ScalarField& U)
    : p_(spec.p), U_(U.vec()) {
  require_same_grid(*spec.grid, U.grid(), "PassFunctional");
  const auto w = spec.grid->weights();
  weights_ = Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  const RobinOperator op(spec.grid, spec.beta);
  form_ = op.symmetrized();
  for (Eigen::Index i = 0; i < U_.size(); ++i)
    form_.coeffRef(i, i) -= weights_[i] * p_ * (U_[i] > 0.0 ? std::pow(U_[i], p_ - 1.0) : 0.0);
  form_.makeCompressed();
}

double PassFunctional::norm_squared(const Eigen::VectorXd& v) const { return v.dot(form_ * v); }

Eigen::VectorXd PassFunctional::g(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) out[i] = pass_g(U_[i], v[i], p_);
  return out;
}

double PassFunctional::value(const Eigen::VectorXd& v) const {
  double potential = 0.0;
  for (Eigen::Index i = 0; i < v.size(); ++i) potential += weights_[i] * pass_G(U_[i], v[i], p_);
  return 0.5 * norm_squared(v) - potential;
}

Eigen::VectorXd PassFunctional::gradient(const Eigen::VectorXd& v) const {
  return form_ * v - weights_.cwiseProduct(g(v));
}

namespace {

// The maximizer of s -> I(s v) over s > 0, returned as s* v.
Eigen::VectorXd ray_maximum(const PassFunctional& I, const Eigen::VectorXd& v) {
  require(v.maxCoeff() > 0.0, ErrorCode::PassNotFound,
          "mountain pass collapsed: descent direction has no positive part");
  const double Q = I.norm_squared(v);
  const Eigen::VectorXd& w = I.weights();
  auto slope = [&](double s) { return Q - w.dot(I.g(s * v).cwiseProduct(v)) / s; };
  double lo = 0.0;
  double hi = 1.0;
  while (slope(hi) > 0.0) {
    lo = hi;
    hi *= 2.0;
    require(hi < 1e300, ErrorCode::PassNotFound, "mountain pass collapsed: functional unbounded along ray");
  }
  for (int k = 0; k < 200 && hi - lo > 1e-15 * hi; ++k) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) > 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi) * v;
}

}  // namespace

MountainPassResult mountain_pass_second(const ProblemSpec& spec, const ScalarField& U,
                                        const MountainPassOptions& opts) {
  require_same_grid(*spec.grid, U.grid(), "mountain_pass_second");
  const EigenReport eig = linearized_eigen(spec, U);
  require(eig.lambda1 > 0.0, ErrorCode::PreconditionViolated,
          "mountain pass needs a positive linearized eigenvalue at U, got lambda1=" +
              std::to_string(eig.lambda1));

  const PassFunctional I(spec, U);
  const SpdFactorization metric(I.form(), spec.grid->cells_per_axis() > LinearSolverOptions{}.direct_limit);
  const Eigen::VectorXd& w = I.weights();
  const Eigen::VectorXd phi = eig.phi1.vec();

  double t = 1.0;
  while (!(I.value(t * phi) < 0.0)) {
    t *= 2.0;
    require(t < 1e300, ErrorCode::PassNotFound, "functional stays nonnegative along the first eigenfunction");
  }

  std::vector<PassRecord> history;
  Eigen::VectorXd v = ray_maximum(I, phi);
  double Iv = I.value(v);
  double alpha = 1.0;
  for (int it = 0; it < opts.max_iter; ++it) {
    const Eigen::VectorXd d = v - metric.solve(w.cwiseProduct(I.g(v)));
    const double gn = std::sqrt(std::max(0.0, I.norm_squared(d)));
    history.push_back({it, Iv, gn, alpha, v.lpNorm<Eigen::Infinity>()});
    if (gn <= opts.grad_tol * std::max(1.0, std::sqrt(I.norm_squared(v)))) break;
    bool accepted = false;
    while (alpha > 1e-14) {
      const Eigen::VectorXd trial = ray_maximum(I, (v - alpha * d).cwiseMax(0.0));
      const double It = I.value(trial);
      if (It < Iv) {
        v = trial;
        Iv = It;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) break;
    alpha = std::min(1.0, 2.0 * alpha);
  }

  require(v.maxCoeff() > 1e-8 * (1.0 + U.norm_inf()), ErrorCode::PassNotFound,
          "mountain pass collapsed onto the minimal solution");
  ScalarField v_descent(spec.grid, v);
  SolveReport polished = newton_refine(spec, ScalarField(spec.grid, Eigen::VectorXd(U.vec() + v)), opts.newton);
  if (polished.status == SolveStatus::Converged) {
    const ScalarField& u2 = *polished.solution;
    for (std::size_t k : spec.grid->interior())
      require(u2[k] - U[k] >= 1e-10, ErrorCode::PassNotFound,
              "polished solution is not strictly above the minimal solution (node " + std::to_string(k) + ")");
  }
  return MountainPassResult{std::move(polished), std::move(v_descent), std::move(history), eig.lambda1, t};
}

}  // namespace robinlab
