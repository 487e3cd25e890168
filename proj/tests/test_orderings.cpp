#include <doctest.h>

#include "robinlab/elliptic.hpp"
#include "robinlab/error.hpp"
#include "robinlab/orderings.hpp"

#include <cmath>
#include <random>

using namespace robinlab;

namespace {

struct SolutionPair {
  ProblemSpec spec;
  ScalarField U;
  ScalarField u2;
  ScalarField v_descent;
};

SolutionPair solution_pair(int n) {
  const auto g = make_interval(0, 1, n);
  const auto f = ScalarField::constant(g, 1.0);
  const auto bs = find_beta_star(g, 2.0, f, 0.001, 10.0, 1e-3);
  const auto spec = ProblemSpec::make(g, 2.0, 2 * bs.beta_hi, f);
  auto U = *newton_refine(spec, *monotone_iterate(spec).solution).solution;
  auto mp = mountain_pass_second(spec, U);
  return {spec, U, *mp.report.solution, mp.v_descent};
}

ScalarField minus(const ScalarField& a, const ScalarField& b) {
  return ScalarField(a.grid_ptr(), Eigen::VectorXd(a.vec() - b.vec()));
}

}  // namespace

TEST_CASE("power increment ratio values") {
  CHECK(power_increment_ratio(1e-12, 1.0, 2.0) == doctest::Approx(2.0).epsilon(1e-11));
  CHECK(power_increment_ratio(1.0, 1.0, 2.0) == doctest::Approx(3.0).epsilon(1e-15));
  CHECK(power_increment_ratio(0.5, 2.0, 3.0) == doctest::Approx((std::pow(2.5, 3) - 8) / 0.5).epsilon(1e-14));
  CHECK_THROWS_AS(power_increment_ratio(0.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(power_increment_ratio(1.0, 0.0, 2.0), Error);
  CHECK_THROWS_AS(power_increment_ratio(1.0, 1.0, 1.0), Error);
}

TEST_CASE("power increment ratio is continuous across the series switch") {
  for (double b : {0.3, 1.0, 7.0}) {
    for (double p : {1.2, 2.0, 4.5}) {
      const double t = 1.001e-8 * b;
      const double series = p * std::pow(b, p - 1) * (1 + (p - 1) * t / (2 * b));
      CHECK(power_increment_ratio(t, b, p) == doctest::Approx(series).epsilon(1e-13));
    }
  }
}

TEST_CASE("power increment ratio is nondecreasing in t") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> ub(0.1, 2.0), up(1.01, 4.0), ut(0.0, 5.0);
  for (int draw = 0; draw < 10; ++draw) {
    const double b = ub(rng), p = up(rng);
    int bad = 0;
    for (int k = 0; k < 10000; ++k) {
      double t1 = ut(rng), t2 = ut(rng);
      if (t1 > t2) std::swap(t1, t2);
      if (t1 <= 0) continue;
      if (power_increment_ratio(t1, b, p) > power_increment_ratio(t2, b, p) + 1e-12) ++bad;
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("secant gap values") {
  CHECK(secant_gap(0.0, 2.0, 1.0, 2.0) == 0.0);
  CHECK(secant_gap(1.0, 2.0, 1.0, 2.0) == 0.0);
  CHECK(secant_gap(0.5, 2.0, 1.0, 2.0) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK_THROWS_AS(secant_gap(0.5, 1.0, 1.0, 2.0), Error);
  CHECK_THROWS_AS(secant_gap(0.5, 0.5, 1.0, 2.0), Error);
}

TEST_CASE("secant gap sign pattern over random samples") {
  std::mt19937_64 rng(63);
  std::uniform_real_distribution<double> ub(0.05, 5.0), ud(1e-3, 5.0), up(1.0, 5.0), ue(0.0, 3.0);
  int bad = 0;
  for (int k = 0; k < 10000; ++k) {
    const double b = ub(rng), a = b + ud(rng), p = up(rng), eta = ue(rng);
    if (p <= 1.0 || eta == 0.0 || eta == 1.0) continue;
    const double F = secant_gap(eta, a, b, p);
    if (eta < 1.0 ? !(F > 0) : !(F < 0)) ++bad;
    CHECK(secant_gap(0.0, a, b, p) == 0.0);
    CHECK(secant_gap(1.0, a, b, p) == 0.0);
  }
  CHECK(bad == 0);
}

TEST_CASE("secant gap derivative signs at 0 and 1") {
  std::mt19937_64 rng(62);
  std::uniform_real_distribution<double> ub(0.1, 3.0), ud(0.05, 3.0), up(1.1, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double b = ub(rng), a = b + ud(rng), p = up(rng);
    const double e = 1e-5;
    CHECK((secant_gap(e, a, b, p) - secant_gap(-e, a, b, p)) / (2 * e) > 0);
    CHECK((secant_gap(1 + e, a, b, p) - secant_gap(1 - e, a, b, p)) / (2 * e) < 0);
  }
}

TEST_CASE("threshold datum with equal solutions is U") {
  const auto g = make_interval(0, 1, 16);
  const auto U = ScalarField::from_function(g, [](Point p) { return 1 + p.x; });
  for (double eta : {0.0, 0.3, 2.5}) {
    const auto d = build_threshold_datum(U, U, eta);
    for (std::size_t i = 0; i < U.size(); ++i) CHECK(d[i] == U[i]);
  }
  CHECK_THROWS_AS(build_threshold_datum(U, U, 1.0), Error);
  CHECK_THROWS_AS(build_threshold_datum(U, U, -0.5), Error);
  const auto lower = ScalarField::constant(g, 0.5);
  CHECK_THROWS_AS(build_threshold_datum(U, lower, 0.5), Error);
}

TEST_CASE("threshold data are strict super- and sub-solutions between U and u2") {
  const auto pr = solution_pair(64);
  const auto below = build_threshold_datum(pr.U, pr.u2, 0.5);
  const auto above = build_threshold_datum(pr.U, pr.u2, 1.5);
  const auto cb = check_threshold_datum(pr.spec, below, 0.5);
  const auto ca = check_threshold_datum(pr.spec, above, 1.5);
  CHECK(cb.super_solution);
  CHECK(cb.holds);
  CHECK(!ca.super_solution);
  CHECK(ca.holds);
  for (std::size_t i = 0; i < below.size(); ++i) {
    CHECK(below[i] >= pr.U[i]);
    CHECK(below[i] <= pr.u2[i]);
    CHECK(above[i] >= pr.u2[i]);
  }
}

TEST_CASE("intersection identity") {
  const auto pr = solution_pair(128);
  const auto v2 = minus(pr.u2, pr.U);
  CHECK(intersection_identity_residual(pr.U, v2, v2, pr.spec) == 0.0);
  const auto doubled = ScalarField(v2.grid_ptr(), Eigen::VectorXd(2.0 * v2.vec()));
  CHECK(intersection_identity_residual(pr.U, v2, doubled, pr.spec) < 0.0);
  const double r = intersection_identity_residual(pr.U, pr.v_descent, v2, pr.spec);
  CHECK(std::abs(r) <= 1e-6 * intersection_identity_scale(pr.v_descent, v2));
  const auto negative = ScalarField::constant(pr.spec.grid, -1.0);
  CHECK_THROWS_AS(intersection_identity_residual(pr.U, negative, v2, pr.spec), Error);
}
