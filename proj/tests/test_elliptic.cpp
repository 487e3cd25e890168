#include <doctest.h>

#include "robinlab/elliptic.hpp"
#include "robinlab/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace robinlab;

namespace {

double square_torsion_series(double x, double y) {
  const double pi = std::numbers::pi;
  double s = 0;
  for (int m = 1; m < 400; m += 2)
    for (int n = 1; n < 400; n += 2)
      s += std::sin(m * pi * x) * std::sin(n * pi * y) / (m * n * double(m * m + n * n));
  return 16.0 / std::pow(pi, 4) * s;
}

double robin_root(double beta) {
  double lo = 1e-12, hi = std::numbers::pi - 1e-12;
  for (int k = 0; k < 200; ++k) {
    const double mid = 0.5 * (lo + hi);
    (mid * std::tan(mid / 2) - beta < 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

ProblemSpec unit_problem(int n, double p, double beta, double f) {
  const auto g = make_interval(0, 1, n);
  return ProblemSpec::make(g, p, beta, ScalarField::constant(g, f));
}

}  // namespace

TEST_CASE("torsion constants on the unit interval with p = 2") {
  const auto r = torsion_report(make_interval(0, 1, 64), 2.0, 2.0);
  CHECK(r.M_h == doctest::Approx(1.0 / 64).epsilon(1e-12));
  CHECK(r.Lambda == doctest::Approx(32).epsilon(1e-12));
  CHECK(r.gap == doctest::Approx(16).epsilon(1e-12));
  CHECK(r.F_bound == doctest::Approx(16).epsilon(1e-12));
  CHECK(r.phi_beta.max() == doctest::Approx(0.375).epsilon(1e-12));
}

TEST_CASE("gap equals F_bound for several exponents") {
  for (const auto& g : {make_interval(0, 1, 32), make_rectangle(0, 1, 0, 1, 16)}) {
    for (double p : {1.5, 2.0, 3.0, 4.5}) {
      const auto r = torsion_report(g, p, 1.0);
      CHECK(std::abs(r.gap - r.F_bound) <= 1e-12 * r.F_bound);
      CHECK(r.M_h > 0);
      CHECK(r.Lambda > 0);
      CHECK(r.gap > 0);
    }
  }
}

TEST_CASE("square torsion maximum matches the sine series") {
  const auto g = make_rectangle(0, 1, 0, 1, 128);
  const auto r = torsion_report(g, 2.0, 1.0);
  const double oracle = square_torsion_series(0.5, 0.5);
  CHECK(oracle == doctest::Approx(0.0736713).epsilon(1e-5));
  CHECK(std::abs(r.h.max() - oracle) <= 1e-4);
  CHECK(std::abs(r.M_h - oracle * oracle) <= 1e-4);
}

TEST_CASE("Robin torsion lies above Dirichlet and decreases in beta") {
  for (const auto& g : {make_interval(0, 1, 32), make_rectangle(0, 1, 0, 1, 16)}) {
    std::vector<TorsionReport> reps;
    for (double beta : {0.5, 1.0, 2.0, 4.0, 8.0}) reps.push_back(torsion_report(g, 2.0, beta));
    for (std::size_t k = 0; k < reps.size(); ++k) {
      for (std::size_t i = 0; i < g->node_count(); ++i) CHECK(reps[k].phi_beta[i] >= reps[k].h[i] - 1e-10);
      if (k == 0) continue;
      for (std::size_t i = 0; i < g->node_count(); ++i) CHECK(reps[k].phi_beta[i] <= reps[k - 1].phi_beta[i] + 1e-10);
    }
  }
}

TEST_CASE("Robin torsion approaches Dirichlet like 1/beta") {
  const auto g = make_rectangle(0, 1, 0, 1, 16);
  auto gap = [&](double beta) {
    const auto r = torsion_report(g, 2.0, beta);
    double m = 0;
    for (std::size_t i = 0; i < g->node_count(); ++i) m = std::max(m, std::abs(r.phi_beta[i] - r.h[i]));
    return m;
  };
  for (double beta : {50.0, 100.0, 200.0}) {
    const double ratio = gap(beta) / gap(2 * beta);
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.2));
  }
}

TEST_CASE("condition F verdicts") {
  const auto g = make_interval(0, 1, 32);
  const auto rep = torsion_report(g, 2.0, 1.0);
  auto verdict = [&](double c) { return check_condition_F(unit_problem(32, 2.0, 1.0, c), rep); };
  CHECK(verdict(0.0).reason == ConditionF::Reason::ZeroSource);
  CHECK(verdict(0.0).describe() == "violated: f≡0");
  CHECK(verdict(1.0).admissible());
  const auto v16 = verdict(16.0);
  CHECK(v16.reason == ConditionF::Reason::BoundExceeded);
  CHECK(v16.node.has_value());
}

TEST_CASE("monotone iteration with zero source stops at zero") {
  const auto r = monotone_iterate(unit_problem(32, 2.0, 1.0, 0.0));
  CHECK(r.status == SolveStatus::Converged);
  CHECK(r.iterations == 1);
  CHECK(r.solution->norm_inf() == 0.0);
}

TEST_CASE("monotone iteration converges below the super-solution for large beta") {
  const auto spec = unit_problem(64, 2.0, 10.0, 1.0);
  const auto r = monotone_iterate(spec);
  REQUIRE(r.status == SolveStatus::Converged);
  CHECK(r.residual_inf <= 1e-8);
  CHECK(r.monotone_violations == 0);
  const auto tr = torsion_report(spec.grid, 2.0, 10.0);
  for (std::size_t i = 0; i < spec.grid->node_count(); ++i) CHECK((*r.solution)[i] <= tr.Lambda * tr.phi_beta[i]);
  for (std::size_t k = 1; k < r.history.size(); ++k)
    CHECK(r.history[k].norm_inf >= r.history[k - 1].norm_inf - 1e-12);
  CHECK(r.solution->min() >= -1e-12);
}

TEST_CASE("monotone iteration diverges for tiny beta") {
  const auto r = monotone_iterate(unit_problem(64, 2.0, 0.001, 1.0));
  CHECK(r.status == SolveStatus::Diverged);
  CHECK(!r.solution.has_value());
  CHECK(r.history.back().norm_inf > 1e6);
  CHECK(r.monotone_violations == 0);
}

TEST_CASE("monotone iteration rejects beta = 0") {
  CHECK_THROWS_AS(monotone_iterate(unit_problem(16, 2.0, 0.0, 1.0)), Error);
}

TEST_CASE("minimal solution decreases strictly in beta") {
  const auto a = monotone_iterate(unit_problem(32, 2.0, 3.0, 1.0));
  const auto b = monotone_iterate(unit_problem(32, 2.0, 6.0, 1.0));
  REQUIRE(a.status == SolveStatus::Converged);
  REQUIRE(b.status == SolveStatus::Converged);
  for (std::size_t i = 1; i < 32; ++i) CHECK((*b.solution)[i] < (*a.solution)[i]);
}

TEST_CASE("Newton keeps an exact solution fixed") {
  const auto spec = unit_problem(64, 2.0, 10.0, 1.0);
  const auto first = newton_refine(spec, *monotone_iterate(spec).solution);
  REQUIRE(first.status == SolveStatus::Converged);
  const auto again = newton_refine(spec, *first.solution);
  CHECK(again.status == SolveStatus::Converged);
  CHECK(again.iterations <= 1);
  for (std::size_t i = 0; i < spec.grid->node_count(); ++i)
    CHECK(std::abs((*again.solution)[i] - (*first.solution)[i]) <= 1e-12);
}

TEST_CASE("Newton sharpens the monotone limit in a few steps") {
  for (const auto& spec : {unit_problem(64, 2.0, 3.0, 1.0),
                           ProblemSpec::make(make_rectangle(0, 1, 0, 1, 24), 3.0, 5.0,
                                             ScalarField::constant(make_rectangle(0, 1, 0, 1, 24), 0.5))}) {
    const auto mono = monotone_iterate(spec);
    REQUIRE(mono.status == SolveStatus::Converged);
    const auto r = newton_refine(spec, *mono.solution);
    CHECK(r.status == SolveStatus::Converged);
    CHECK(r.residual_inf <= 1e-12);
    CHECK(r.iterations <= 5);
  }
}

TEST_CASE("Newton Jacobian equals the linearized eigen operator") {
  const auto g = make_rectangle(0, 1, 0, 1, 12);
  const auto spec = ProblemSpec::make(g, 2.5, 2.0, ScalarField::constant(g, 0.3));
  const auto U = *monotone_iterate(spec).solution;
  const SparseMatrix J = newton_jacobian(spec, U);
  const SparseMatrix L = linearized_operator(spec, U);
  CHECK((J - L).norm() == 0.0);
}

TEST_CASE("Newton from a huge constant near the fold does not report a false solution") {
  const auto base = unit_problem(64, 2.0, 1.0, 1.0);
  const auto bs = find_beta_star(base.grid, 2.0, base.f, 0.001, 10.0, 1e-3);
  const auto spec = base.with_beta(bs.beta_hi * 1.001);
  const auto huge = ScalarField::constant(spec.grid, 1e3);
  try {
    const auto r = newton_refine(spec, huge);
    if (r.status == SolveStatus::Converged) {
      // Whatever it found must be a genuine solution of the discrete problem.
      CHECK(r.residual_inf <= 1e-12);
    } else {
      CHECK(r.status == SolveStatus::MaxIter);
    }
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SingularJacobian);
  }
}

TEST_CASE("beta star bracket errors") {
  const auto g = make_interval(0, 1, 32);
  CHECK_THROWS_AS(find_beta_star(g, 2.0, ScalarField::zeros(g), 0.001, 10.0, 1e-3), Error);
  try {
    find_beta_star(g, 2.0, ScalarField::zeros(g), 0.001, 10.0, 1e-3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidBracket);
  }
  CHECK_THROWS_AS(find_beta_star(g, 2.0, ScalarField::constant(g, 1), 0.001, 10.0, 0.0), Error);
  CHECK_THROWS_AS(find_beta_star(g, 2.0, ScalarField::constant(g, 1), 0.001, 10.0, -1.0), Error);
}

TEST_CASE("beta star bisection is monotone and self-consistent under refinement") {
  double est[2];
  int k = 0;
  for (int n : {64, 128}) {
    const auto g = make_interval(0, 1, n);
    const auto r = find_beta_star(g, 2.0, ScalarField::constant(g, 1.0), 0.001, 10.0, 1e-3);
    CHECK(r.width() <= 1e-3);
    CHECK(r.beta_lo < r.beta_hi);
    for (const auto& pr : r.probes) {
      if (pr.beta <= r.beta_lo) CHECK(pr.status == SolveStatus::Diverged);
      if (pr.beta >= r.beta_hi) CHECK(pr.status == SolveStatus::Converged);
    }
    est[k++] = 0.5 * (r.beta_lo + r.beta_hi);
  }
  CHECK(std::abs(est[0] - est[1]) < 0.05 * est[1]);
}

TEST_CASE("verdict monotonicity check") {
  CHECK_NOTHROW(check_verdict_monotone({{0.1, SolveStatus::Diverged, 5}, {1.0, SolveStatus::Converged, 5}}));
  CHECK_THROWS_AS(check_verdict_monotone({{0.1, SolveStatus::Converged, 5}, {1.0, SolveStatus::Diverged, 5}}), Error);
}

TEST_CASE("eigenvalue at U = 0 matches the transcendental root") {
  const auto spec = unit_problem(256, 2.0, 1.0, 0.0);
  const auto r = linearized_eigen(spec, ScalarField::zeros(spec.grid));
  const double mu = robin_root(1.0);
  CHECK(std::abs(r.lambda1 - mu * mu) <= 1e-3);
  CHECK(r.residual <= 1e-8);
  CHECK(r.phi1.max() == doctest::Approx(1.0));
  CHECK(r.phi1.min() >= -1e-10);
}

TEST_CASE("eigenvalue tends to the Dirichlet value for large beta") {
  const auto spec = unit_problem(256, 2.0, 1e6, 0.0);
  const auto r = linearized_eigen(spec, ScalarField::zeros(spec.grid));
  const double pi2 = std::numbers::pi * std::numbers::pi;
  CHECK(std::abs(r.lambda1 - pi2) <= 0.01 * pi2);
}

TEST_CASE("eigenvalue is positive at minimal solutions") {
  for (double beta : {2.0, 5.0, 20.0}) {
    const auto spec = unit_problem(64, 2.0, beta, 1.0);
    const auto mono = monotone_iterate(spec);
    REQUIRE(mono.status == SolveStatus::Converged);
    const auto r = linearized_eigen(spec, *mono.solution);
    CHECK(r.lambda1 > 0);
    CHECK(r.residual <= 1e-8);
  }
}

TEST_CASE("pass functional normalization and gradient") {
  const auto spec = unit_problem(32, 2.0, 4.0, 1.0);
  const auto U = *newton_refine(spec, *monotone_iterate(spec).solution).solution;
  const PassFunctional I(spec, U);
  const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(U.size()));
  CHECK(I.value(zero) == 0.0);
  CHECK(I.g(zero).lpNorm<Eigen::Infinity>() == 0.0);
  CHECK(pass_g(1.3, 0.0, 2.5) == 0.0);
  CHECK(pass_G(1.3, 0.0, 2.5) == 0.0);
  CHECK(pass_g(1.3, 0.2, 2.5) > 0.0);

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> Ud(0.0, 0.3);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::VectorXd v(zero.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Ud(rng);
    const Eigen::VectorXd grad = I.gradient(v);
    Eigen::VectorXd fd(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double eps = 1e-6;
      Eigen::VectorXd a = v, b = v;
      a[i] += eps;
      b[i] -= eps;
      fd[i] = (I.value(a) - I.value(b)) / (2 * eps);
    }
    CHECK((fd - grad).lpNorm<Eigen::Infinity>() <= 1e-5 * grad.lpNorm<Eigen::Infinity>());
  }
}

TEST_CASE("g and G agree between series and closed form") {
  for (double p : {1.5, 2.0, 3.7}) {
    for (double U : {0.5, 2.0}) {
      const double v = 0.0099 * U, v2 = 0.0101 * U;
      CHECK(pass_g(U, v, p) == doctest::Approx(pass_g(U, v2, p) * (v / v2) * (v / v2)).epsilon(0.05));
      const double h = 1e-7;
      const double dG = (pass_G(U, 0.3 + h, p) - pass_G(U, 0.3 - h, p)) / (2 * h);
      CHECK(dG == doctest::Approx(pass_g(U, 0.3, p)).epsilon(1e-7));
      const double dGs = (pass_G(U, 1e-3 + 1e-9, p) - pass_G(U, 1e-3 - 1e-9, p)) / 2e-9;
      CHECK(dGs == doctest::Approx(pass_g(U, 1e-3, p)).epsilon(1e-5));
    }
  }
}

TEST_CASE("mountain pass finds a second solution above the minimal one") {
  const auto base = unit_problem(64, 2.0, 1.0, 1.0);
  const auto bs = find_beta_star(base.grid, 2.0, base.f, 0.001, 10.0, 1e-3);
  const auto spec = base.with_beta(2 * bs.beta_hi);
  const auto U = *newton_refine(spec, *monotone_iterate(spec).solution).solution;
  const auto mp = mountain_pass_second(spec, U);
  REQUIRE(mp.report.status == SolveStatus::Converged);
  CHECK(mp.lambda1 > 0);
  CHECK(mp.report.residual_inf <= 1e-12);
  const auto& u2 = *mp.report.solution;
  for (std::size_t k : spec.grid->interior()) CHECK(u2[k] - U[k] >= 1e-10);
  for (std::size_t k = 0; k < U.size(); ++k) CHECK(U[k] <= u2[k] + 1e-10);
  for (std::size_t k = 1; k < mp.history.size(); ++k) CHECK(mp.history[k].functional < mp.history[k - 1].functional);
}

TEST_CASE("mountain pass refuses a non-positive linearization") {
  const auto g = make_interval(0, 1, 32);
  const auto spec = ProblemSpec::make(g, 2.0, 1.0, ScalarField::constant(g, 1.0));
  // A large positive U makes -Δ - pU^{p-1} indefinite.
  CHECK_THROWS_AS(mountain_pass_second(spec, ScalarField::constant(g, 50.0)), Error);
  try {
    mountain_pass_second(spec, ScalarField::constant(g, 50.0));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PreconditionViolated);
  }
}
