#include <doctest.h>

#include "robinlab/robinlab.h"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

namespace {

struct Owned {
  rl_grid* grid = nullptr;
  rl_field* f = nullptr;
  rl_problem* problem = nullptr;
  ~Owned() {
    rl_problem_free(problem);
    rl_field_free(f);
    rl_grid_free(grid);
  }
};

nlohmann::json take_json(char* s) {
  auto j = nlohmann::json::parse(s);
  rl_string_free(s);
  return j;
}

void make_problem(Owned& o, int n, double beta, double f) {
  REQUIRE(rl_grid_interval(0, 1, n, &o.grid) == RL_OK);
  REQUIRE(rl_field_constant(o.grid, f, &o.f) == RL_OK);
  REQUIRE(rl_problem_create(o.grid, 2.0, beta, o.f, &o.problem) == RL_OK);
}

}  // namespace

TEST_CASE("invalid arguments map to status codes with a message") {
  rl_grid* g = nullptr;
  CHECK(rl_grid_interval(0, 1, 2, &g) == RL_INVALID_ARGUMENT);
  CHECK(g == nullptr);
  CHECK(std::string(rl_last_error()).size() > 0);
  CHECK(rl_grid_interval(1, 0, 8, &g) == RL_INVALID_ARGUMENT);
  CHECK(rl_grid_interval(0, 1, 8, nullptr) == RL_INVALID_ARGUMENT);
  CHECK(std::string(rl_status_name(RL_OK)) == "ok");
  CHECK(std::string(rl_status_name(RL_BLOW_UP == 2 ? RL_INVALID_BRACKET : RL_OK)).size() > 0);
}

TEST_CASE("grid and field accessors round trip through the handle API") {
  Owned o;
  REQUIRE(rl_grid_rectangle(0, 1, 0, 2, 8, &o.grid) == RL_OK);
  CHECK(rl_grid_dimension(o.grid) == 2);
  CHECK(rl_grid_node_count(o.grid) == 81);
  CHECK(rl_grid_boundary_count(o.grid) == 32);
  double x = -1, y = -1;
  REQUIRE(rl_grid_coord(o.grid, 80, &x, &y) == RL_OK);
  CHECK(x == doctest::Approx(1.0));
  CHECK(y == doctest::Approx(2.0));
  CHECK(rl_grid_coord(o.grid, 81, &x, &y) == RL_INVALID_ARGUMENT);

  std::vector<double> v(81);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.37 * static_cast<double>(i)) / 3.0;
  rl_field* field = nullptr;
  REQUIRE(rl_field_from_values(o.grid, v.data(), v.size(), &field) == RL_OK);
  CHECK(rl_field_from_values(o.grid, v.data(), 80, &o.f) != RL_OK);

  const std::string path = "capi_roundtrip.csv";
  REQUIRE(rl_field_write_csv(field, path.c_str()) == RL_OK);
  rl_field* back = nullptr;
  REQUIRE(rl_field_read_csv(o.grid, path.c_str(), &back) == RL_OK);
  std::vector<double> w(81);
  CHECK(rl_field_values(back, w.data(), w.size()) == 81);
  CHECK(w == v);
  CHECK(rl_field_read_csv(o.grid, "no_such_file.csv", &o.f) == RL_IO);
  std::remove(path.c_str());

  double integral = 0;
  rl_field* one = nullptr;
  REQUIRE(rl_field_constant(o.grid, 1.0, &one) == RL_OK);
  REQUIRE(rl_domain_integral(one, &integral) == RL_OK);
  CHECK(integral == doctest::Approx(2.0).epsilon(1e-14));
  REQUIRE(rl_boundary_integral(one, one, &integral) == RL_OK);
  CHECK(integral == doctest::Approx(6.0).epsilon(1e-14));
  rl_field_free(one);
  rl_field_free(back);
  rl_field_free(field);
}

TEST_CASE("fields from different grids are rejected") {
  Owned a, b;
  make_problem(a, 8, 1.0, 1.0);
  make_problem(b, 16, 1.0, 1.0);
  rl_field* d = nullptr;
  CHECK(rl_field_difference(a.f, b.f, &d) == RL_GRID_MISMATCH);
  CHECK(d == nullptr);
}

TEST_CASE("torsion constants and condition F through the C API") {
  Owned o;
  make_problem(o, 64, 4.0, 1.0);
  rl_torsion* t = nullptr;
  REQUIRE(rl_torsion_report(o.grid, 2.0, 4.0, &t) == RL_OK);
  double M = 0, L = 0, gap = 0, F = 0;
  REQUIRE(rl_torsion_constants(t, &M, &L, &gap, &F) == RL_OK);
  CHECK(M == doctest::Approx(0.015625).epsilon(1e-12));
  CHECK(L == doctest::Approx(32.0).epsilon(1e-12));
  CHECK(gap == doctest::Approx(16.0).epsilon(1e-12));
  int ok = -1;
  char* json = nullptr;
  REQUIRE(rl_condition_f(o.problem, t, &ok, &json) == RL_OK);
  CHECK(ok == 1);
  CHECK(take_json(json).at("admissible") == true);
  REQUIRE(rl_torsion_to_json(t, &json) == RL_OK);
  CHECK(take_json(json).at("F_bound").get<double>() == doctest::Approx(16.0));
  rl_torsion_free(t);
}

TEST_CASE("solve, eigen and mountain pass through the C API") {
  Owned o;
  make_problem(o, 64, 2.5, 1.0);
  rl_solve* s = nullptr;
  REQUIRE(rl_monotone_iterate(o.problem, nullptr, &s) == RL_OK);
  REQUIRE(rl_solve_status_of(s) == RL_CONVERGED);
  rl_field* U = nullptr;
  REQUIRE(rl_solve_solution(s, &U) == RL_OK);
  char* json = nullptr;
  REQUIRE(rl_solve_to_json(s, &json) == RL_OK);
  const auto j = take_json(json);
  CHECK(j.at("status") == "Converged");
  CHECK(j.at("iterations").get<int>() == rl_solve_iterations(s));

  rl_newton_options nopt;
  rl_newton_options_default(&nopt);
  rl_solve* polished = nullptr;
  REQUIRE(rl_newton_refine(o.problem, U, &nopt, &polished) == RL_OK);
  CHECK(rl_solve_residual(polished) <= 1e-12);

  rl_eigen* e = nullptr;
  REQUIRE(rl_linearized_eigen(o.problem, U, &e) == RL_OK);
  CHECK(rl_eigen_lambda1(e) > 0.0);

  rl_pass* mp = nullptr;
  REQUIRE(rl_mountain_pass(o.problem, U, &mp) == RL_OK);
  CHECK(rl_pass_status(mp) == RL_CONVERGED);
  rl_field* u2 = nullptr;
  REQUIRE(rl_pass_solution(mp, &u2) == RL_OK);
  CHECK(rl_field_max(u2) > rl_field_max(U));

  rl_field_free(u2);
  rl_pass_free(mp);
  rl_eigen_free(e);
  rl_solve_free(polished);
  rl_field_free(U);
  rl_solve_free(s);
}

TEST_CASE("small beta is a Diverged verdict, not an error") {
  Owned o;
  make_problem(o, 32, 0.01, 1.0);
  rl_monotone_options opts;
  rl_monotone_options_default(&opts);
  rl_solve* s = nullptr;
  REQUIRE(rl_monotone_iterate(o.problem, &opts, &s) == RL_OK);
  CHECK(rl_solve_status_of(s) == RL_DIVERGED);
  rl_field* u = nullptr;
  CHECK(rl_solve_solution(s, &u) == RL_INVALID_ARGUMENT);
  rl_solve_free(s);
}

TEST_CASE("critical parameter bracket and bad brackets") {
  Owned o;
  make_problem(o, 32, 1.0, 1.0);
  rl_beta_star* b = nullptr;
  REQUIRE(rl_find_beta_star(o.grid, 2.0, o.f, 0.001, 10.0, 1e-3, 16, nullptr, &b) == RL_OK);
  double lo = 0, hi = 0;
  REQUIRE(rl_beta_star_bracket(b, &lo, &hi) == RL_OK);
  CHECK(hi - lo <= 1e-3);
  CHECK(lo > 1.0);
  CHECK(hi < 1.5);
  rl_beta_star_free(b);
  CHECK(rl_find_beta_star(o.grid, 2.0, o.f, 5.0, 10.0, 1e-3, 0, nullptr, &b) == RL_INVALID_BRACKET);
}

TEST_CASE("scalar ordering helpers through the C API") {
  double r = 0;
  REQUIRE(rl_power_increment_ratio(0.5, 1.0, 2.0, &r) == RL_OK);
  CHECK(r == doctest::Approx(2.5));
  double F = 0;
  REQUIRE(rl_secant_gap(0.5, 2.0, 1.0, 2.0, &F) == RL_OK);
  CHECK(F == doctest::Approx(0.25));
  CHECK(F > 0.0);
  CHECK(rl_power_increment_ratio(0.5, -1.0, 2.0, &r) == RL_INVALID_ARGUMENT);
}

TEST_CASE("evolution verdicts and trace access") {
  Owned o;
  make_problem(o, 16, 1.0, 0.0);
  rl_field* u0 = nullptr;
  REQUIRE(rl_field_constant(o.grid, 2.0, &u0) == RL_OK);
  rl_evolution_config cfg;
  rl_evolution_config_default(&cfg);
  cfg.diffusion = 0;
  cfg.dt_min = 1e-15;
  rl_trace* t = nullptr;
  REQUIRE(rl_evolve(o.problem, u0, &cfg, &t) == RL_OK);
  CHECK(rl_trace_verdict(t) == RL_BLOW_UP);
  double td = 0;
  REQUIRE(rl_trace_t_detect(t, &td) == 1);
  CHECK(td == doctest::Approx(0.5).epsilon(0.02));
  REQUIRE(rl_trace_sample_count(t) > 2);
  rl_trace_sample s0;
  REQUIRE(rl_trace_sample_at(t, 0, &s0) == RL_OK);
  CHECK(s0.max_u == doctest::Approx(2.0).epsilon(0.01));
  char* json = nullptr;
  REQUIRE(rl_trace_to_json(t, &json) == RL_OK);
  CHECK(take_json(json).at("verdict") == "BlowUp");
  rl_trace_free(t);

  cfg.dt0 = -1.0;
  CHECK(rl_evolve(o.problem, u0, &cfg, &t) == RL_INVALID_ARGUMENT);
  rl_field_free(u0);
}
