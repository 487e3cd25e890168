#include <doctest.h>

#include "robinlab/error.hpp"
#include "robinlab/grid.hpp"

#include <bit>
#include <cmath>
#include <random>

using namespace robinlab;

TEST_CASE("interval grid has n+1 nodes and tagged endpoints") {
  const auto g = make_interval(0.0, 1.0, 8);
  CHECK(g->node_count() == 9);
  CHECK(g->hx() == doctest::Approx(0.125));
  REQUIRE(g->boundary().size() == 2);
  CHECK(g->boundary()[0].index == 0);
  CHECK(g->boundary()[0].normals == kMinusX);
  CHECK(g->boundary()[1].index == 8);
  CHECK(g->boundary()[1].normals == kPlusX);
  CHECK(g->coord(8).x == 1.0);
}

TEST_CASE("unit square with n=4 has 16 boundary nodes and 4 double-tagged corners") {
  const auto g = make_rectangle(0, 1, 0, 1, 4);
  CHECK(g->node_count() == 25);
  CHECK(g->boundary().size() == 16);
  int corners = 0;
  for (const auto& b : g->boundary()) {
    const int tags = std::popcount(b.normals);
    CHECK((tags == 1 || tags == 2));
    if (tags == 2) ++corners;
  }
  CHECK(corners == 4);
  CHECK(g->normals(g->index(0, 0)) == (kMinusX | kMinusY));
  CHECK(g->normals(g->index(4, 4)) == (kPlusX | kPlusY));
}

TEST_CASE("interior and boundary partition the nodes") {
  for (int n : {4, 5, 9, 16}) {
    for (const auto& g : {make_interval(-1, 2, n), make_rectangle(0, 2, -1, 1, n)}) {
      CHECK(g->interior().size() + g->boundary().size() == g->node_count());
      std::vector<int> seen(g->node_count(), 0);
      for (auto k : g->interior()) ++seen[k];
      for (const auto& b : g->boundary()) ++seen[b.index];
      for (int s : seen) CHECK(s == 1);
    }
  }
}

TEST_CASE("grid construction rejects too few cells and degenerate bounds") {
  CHECK_THROWS_AS(make_interval(0, 1, 3), Error);
  CHECK_THROWS_AS(make_interval(1, 1, 8), Error);
  CHECK_THROWS_AS(make_interval(2, 1, 8), Error);
  CHECK_THROWS_AS(make_rectangle(0, 1, 1, 0, 8), Error);
  CHECK_THROWS_AS(make_interval(0, INFINITY, 8), Error);
  try {
    make_interval(0, 1, 3);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
}

TEST_CASE("quadrature weights sum to the measure") {
  const auto g1 = make_interval(0, 2, 10);
  double s = 0;
  for (double w : g1->weights()) s += w;
  CHECK(s == doctest::Approx(2.0).epsilon(1e-14));
  const auto g2 = make_rectangle(0, 1, 0, 3, 6);
  s = 0;
  for (double w : g2->weights()) s += w;
  CHECK(s == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(g2->weights()[g2->index(0, 0)] == doctest::Approx(g2->hx() * g2->hy() / 4));
  CHECK(g2->weights()[g2->index(1, 0)] == doctest::Approx(g2->hx() * g2->hy() / 2));
  CHECK(g2->weights()[g2->index(1, 1)] == doctest::Approx(g2->hx() * g2->hy()));
}

TEST_CASE("field_from_function evaluates the rule at nodes") {
  const auto g = make_interval(0, 1, 4);
  const auto z = ScalarField::from_function(g, [](Point) { return 0.0; });
  for (double v : z.values()) CHECK(v == 0.0);
  const auto t = ScalarField::from_function(g, [](Point p) { return p.x * (1 - p.x) / 2; });
  const double expect[] = {0, 3.0 / 32, 1.0 / 8, 3.0 / 32, 0};
  for (int i = 0; i < 5; ++i) CHECK(t[i] == doctest::Approx(expect[i]).epsilon(1e-15));
}

TEST_CASE("field_from_function rejects non-finite values with a location") {
  const auto g = make_interval(0, 1, 8);
  try {
    ScalarField::from_function(g, [](Point p) { return 1.0 / p.x; });
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NonFinite);
    CHECK(std::string(e.what()).find("x=0") != std::string::npos);
  }
}

TEST_CASE("field_from_function is linear in the rule") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-3, 3);
  const auto g = make_rectangle(0, 1, 0, 2, 8);
  for (int trial = 0; trial < 20; ++trial) {
    const double a = U(rng), c1 = U(rng), c2 = U(rng);
    auto g1 = [&](Point p) { return std::sin(c1 * p.x) + p.y * p.y; };
    auto g2 = [&](Point p) { return std::cos(c2 * p.y) * p.x; };
    const auto combined = ScalarField::from_function(g, [&](Point p) { return a * g1(p) + g2(p); });
    const auto f1 = ScalarField::from_function(g, g1);
    const auto f2 = ScalarField::from_function(g, g2);
    for (std::size_t i = 0; i < g->node_count(); ++i)
      CHECK(combined[i] == doctest::Approx(a * f1[i] + f2[i]).epsilon(1e-14));
  }
}

TEST_CASE("fields validate their length") {
  const auto g = make_interval(0, 1, 4);
  CHECK_THROWS_AS(ScalarField(g, std::vector<double>(4, 0.0)), Error);
}

TEST_CASE("problem spec validates exponent, beta and source") {
  const auto g = make_interval(0, 1, 8);
  const auto one = ScalarField::constant(g, 1.0);
  CHECK_NOTHROW(ProblemSpec::make(g, 2.0, 0.0, one));
  CHECK_THROWS_AS(ProblemSpec::make(g, 1.0, 1.0, one), Error);
  CHECK_THROWS_AS(ProblemSpec::make(g, 2.0, -1.0, one), Error);
  CHECK_THROWS_AS(ProblemSpec::make(g, 2.0, 1.0, ScalarField::constant(g, -1.0)), Error);
  const auto other = make_interval(0, 1, 16);
  CHECK_THROWS_AS(ProblemSpec::make(g, 2.0, 1.0, ScalarField::constant(other, 1.0)), Error);
}
