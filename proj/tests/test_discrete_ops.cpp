#include <doctest.h>

#include "robinlab/discrete_ops.hpp"
#include "robinlab/error.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <random>

using namespace robinlab;

namespace {

double smallest_symmetrized_eigenvalue(const RobinOperator& op) {
  // Generalized problem S x = λ D x, i.e. the eigenvalues of the strong operator.
  const Eigen::MatrixXd S = Eigen::MatrixXd(op.symmetrized());
  const auto w = op.grid().weights();
  Eigen::VectorXd d(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) d[static_cast<Eigen::Index>(i)] = 1.0 / std::sqrt(w[i]);
  const Eigen::MatrixXd M = d.asDiagonal() * S * d.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  return es.eigenvalues()[0];
}

// Smallest positive root of μ tan(μ/2) = β by bisection on (0, π).
double robin_root(double beta) {
  double lo = 1e-12, hi = std::numbers::pi - 1e-12;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::tan(mid / 2) - beta < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("ghost-node boundary row") {
  const auto g = make_interval(0, 1, 4);
  const RobinOperator op(g, 1.0);
  const double h = g->hx();
  CHECK(op.matrix().coeff(0, 0) == doctest::Approx((2 + 2 * h) / (h * h)));
  CHECK(op.matrix().coeff(0, 1) == doctest::Approx(-2 / (h * h)));
  CHECK(op.matrix().coeff(4, 4) == doctest::Approx((2 + 2 * h) / (h * h)));
  CHECK(op.matrix().coeff(4, 3) == doctest::Approx(-2 / (h * h)));
  CHECK(op.matrix().coeff(2, 2) == doctest::Approx(2 / (h * h)));
}

TEST_CASE("row pattern has at most 3 entries in 1D and 5 in 2D") {
  const RobinOperator op1(make_interval(0, 1, 10), 1.0);
  const RobinOperator op2(make_rectangle(0, 1, 0, 1, 10), 1.0);
  for (const auto* m : {&op1.matrix(), &op2.matrix()}) {
    Eigen::SparseMatrix<double, Eigen::RowMajor> r = *m;
    const int cap = m == &op1.matrix() ? 3 : 5;
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
      int nnz = 0;
      for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(r, i); it; ++it) ++nnz;
      CHECK(nnz <= cap);
    }
  }
}

TEST_CASE("beta = 0 annihilates constants and is flagged singular") {
  for (const auto& g : {make_interval(0, 1, 8), make_rectangle(0, 2, 0, 1, 8)}) {
    const RobinOperator op(g, 0.0);
    CHECK(op.singular());
    const Eigen::VectorXd r = op.apply(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(g->node_count())));
    CHECK(r.lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK_THROWS_AS(solve_linear(op, ScalarField::constant(g, 1.0)), Error);
  }
}

TEST_CASE("symmetrized operator is symmetric and positive definite") {
  for (const auto& g : {make_interval(0, 1, 16), make_rectangle(0, 1, 0, 2, 12)}) {
    for (double beta : {0.1, 1.0, 50.0}) {
      const RobinOperator op(g, beta);
      const SparseMatrix S = op.symmetrized();
      const SparseMatrix St = S.transpose();
      CHECK((S - St).norm() <= 1e-12 * S.norm());
      CHECK(smallest_symmetrized_eigenvalue(op) > 0.0);
    }
  }
}

TEST_CASE("discrete Green identity on random fields") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N;
  const auto g = make_rectangle(0, 1, 0, 1, 10);
  const RobinOperator op(g, 2.5);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd v(op.symmetrized().rows()), w(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = N(rng), w[i] = N(rng);
    const double a = (op.symmetrized() * v).dot(w);
    const double b = v.dot(op.symmetrized() * w);
    CHECK(std::abs(a - b) <= 1e-12 * (std::abs(a) + std::abs(b) + 1));
  }
}

TEST_CASE("quadratic form equals gradient energy plus boundary term") {
  const auto g = make_rectangle(0, 1, 0, 1, 8);
  const double beta = 3.0;
  const RobinOperator op(g, beta);
  const auto u = ScalarField::from_function(g, [](Point p) { return 1 + p.x * p.x + std::sin(p.y); });
  const Eigen::VectorXd v = u.vec();
  const double form = 0.5 * v.dot(op.symmetrized() * v);
  // Trapezoid of edge differences: each x-edge is shared by the rows of its y-weight.
  double grad = 0;
  const std::size_t m = g->nodes_per_axis();
  for (std::size_t j = 0; j < m; ++j) {
    const double wy = (j == 0 || j == m - 1) ? g->hy() / 2 : g->hy();
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double d = (u[g->index(i + 1, j)] - u[g->index(i, j)]) / g->hx();
      grad += wy * g->hx() * d * d;
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    const double wx = (i == 0 || i == m - 1) ? g->hx() / 2 : g->hx();
    for (std::size_t j = 0; j + 1 < m; ++j) {
      const double d = (u[g->index(i, j + 1)] - u[g->index(i, j)]) / g->hy();
      grad += wx * g->hy() * d * d;
    }
  }
  const double expect = 0.5 * grad + 0.5 * beta * boundary_integral(u, u);
  CHECK(form == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("smallest eigenvalue matches the transcendental Robin oracle") {
  const auto g = make_interval(0, 1, 64);
  const RobinOperator op(g, 1.0);
  const double mu = robin_root(1.0);
  CHECK(mu * mu == doctest::Approx(1.7071).epsilon(1e-3));
  CHECK(smallest_symmetrized_eigenvalue(op) == doctest::Approx(mu * mu).epsilon(1e-3));
}

TEST_CASE("zero right-hand side gives zero") {
  const auto g = make_rectangle(0, 1, 0, 1, 8);
  const auto u = solve_linear(RobinOperator(g, 1.0), ScalarField::zeros(g));
  CHECK(u.norm_inf() == 0.0);
}

TEST_CASE("Dirichlet torsion is exact for the quadratic") {
  const auto g = make_interval(0, 1, 64);
  const auto u = solve_linear(DirichletOperator(g), ScalarField::constant(g, 1.0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = g->coord(i).x;
    CHECK(std::abs(u[i] - x * (1 - x) / 2) <= 1e-12);
  }
}

TEST_CASE("Robin torsion in 1D is the Dirichlet one plus 1/(2 beta)") {
  const auto g = make_interval(0, 1, 64);
  const auto u = solve_linear(RobinOperator(g, 2.0), ScalarField::constant(g, 1.0));
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double x = g->coord(i).x;
    CHECK(std::abs(u[i] - (x * (1 - x) / 2 + 0.25)) <= 1e-10);
  }
}

TEST_CASE("solve residual meets the fixed tolerance") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0, 100);
  const auto g = make_rectangle(0, 1, 0, 1, 32);
  const RobinOperator op(g, 0.5);
  const LinearSolver solver(op);
  Eigen::VectorXd rhs(static_cast<Eigen::Index>(g->node_count()));
  for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = U(rng);
  const Eigen::VectorXd u = solver.solve(rhs);
  CHECK((op.matrix() * u - rhs).lpNorm<Eigen::Infinity>() <= 1e-10 * (1 + rhs.lpNorm<Eigen::Infinity>()));
}

TEST_CASE("iterative path agrees with the direct factorization") {
  const auto g = make_rectangle(0, 1, 0, 1, 24);
  const RobinOperator op(g, 1.0);
  LinearSolverOptions cg;
  cg.direct_limit = 8;
  const auto rhs = ScalarField::from_function(g, [](Point p) { return 1 + p.x * p.y; });
  const auto a = LinearSolver(op).solve(rhs);
  const auto b = LinearSolver(op, cg).solve(rhs);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-9));
}

TEST_CASE("maximum principle surrogate on random nonnegative data") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(0, 1);
  for (const auto& g : {make_interval(0, 1, 40), make_rectangle(0, 1, 0, 1, 16)}) {
    for (double beta : {0.01, 1.0, 1e4}) {
      const LinearSolver solver{RobinOperator(g, beta)};
      for (int trial = 0; trial < 10; ++trial) {
        Eigen::VectorXd rhs(static_cast<Eigen::Index>(g->node_count()));
        for (Eigen::Index i = 0; i < rhs.size(); ++i) rhs[i] = U(rng) < 0.7 ? 0.0 : 10 * U(rng);
        const Eigen::VectorXd u = solver.solve(rhs);
        CHECK(u.minCoeff() >= -1e-12 * rhs.lpNorm<Eigen::Infinity>());
      }
    }
  }
}

TEST_CASE("Dirichlet torsion converges at second order for a sine source") {
  auto error_at = [](int n) {
    const auto g = make_interval(0, 1, n);
    const double pi = std::numbers::pi;
    const auto rhs = ScalarField::from_function(g, [&](Point p) { return pi * pi * std::sin(pi * p.x); });
    const auto u = solve_linear(DirichletOperator(g), rhs);
    double err = 0;
    for (std::size_t i = 0; i < u.size(); ++i) err = std::max(err, std::abs(u[i] - std::sin(pi * g->coord(i).x)));
    return err;
  };
  double prev = error_at(16);
  for (int n : {32, 64, 128}) {
    const double e = error_at(n);
    CHECK(std::log2(prev / e) >= 1.9);
    prev = e;
  }
}

TEST_CASE("boundary and domain integrals") {
  const auto line = make_interval(0, 1, 8);
  const auto sq = make_rectangle(0, 1, 0, 1, 64);
  CHECK(boundary_integral(ScalarField::constant(line, 1), ScalarField::constant(line, 1)) == doctest::Approx(2.0));
  CHECK(boundary_integral(ScalarField::constant(sq, 1), ScalarField::constant(sq, 1)) == doctest::Approx(4.0));
  const auto x = ScalarField::from_function(sq, [](Point p) { return p.x; });
  // Two vertical edges give 0 and 1, the horizontal ones 1/3 each.
  CHECK(boundary_integral(x, x) == doctest::Approx(5.0 / 3.0).epsilon(1e-3));
  CHECK(domain_integral(ScalarField::constant(line, 1)) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(domain_integral(ScalarField::constant(sq, 1)) == doctest::Approx(1.0).epsilon(1e-15));
  const auto g64 = make_interval(0, 1, 64);
  const auto x2 = ScalarField::from_function(g64, [](Point p) { return p.x * p.x; });
  CHECK(std::abs(domain_integral(x2) - 1.0 / 3.0) <= 1e-4);
  CHECK_THROWS_AS(boundary_integral(x, ScalarField::constant(line, 1)), Error);
}
