#include "robinlab/robinlab.h"

#include "robinlab/elliptic.hpp"
#include "robinlab/error.hpp"
#include "robinlab/io.hpp"
#include "robinlab/orderings.hpp"
#include "robinlab/parabolic.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

using namespace robinlab;

struct rl_grid {
  GridPtr grid;
};
struct rl_field {
  ScalarField field;
};
struct rl_problem {
  ProblemSpec spec;
};
struct rl_torsion {
  TorsionReport report;
};
struct rl_solve {
  SolveReport report;
};
struct rl_beta_star {
  BetaStarResult result;
};
struct rl_eigen {
  EigenReport report;
};
struct rl_pass {
  MountainPassResult result;
};
struct rl_trace {
  EnergyTrace trace;
};
struct rl_threshold {
  ThresholdVerdict verdict;
  rl_trace below;
  rl_trace above;
};

namespace {

thread_local std::string last_error;

rl_status map_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return RL_INVALID_ARGUMENT;
    case ErrorCode::GridMismatch: return RL_GRID_MISMATCH;
    case ErrorCode::NonFinite: return RL_NON_FINITE;
    case ErrorCode::SingularOperator: return RL_SINGULAR_OPERATOR;
    case ErrorCode::SolverFailure: return RL_SOLVER_FAILURE;
    case ErrorCode::InvalidBracket: return RL_INVALID_BRACKET;
    case ErrorCode::NonMonotoneVerdict: return RL_NON_MONOTONE_VERDICT;
    case ErrorCode::SingularJacobian: return RL_SINGULAR_JACOBIAN;
    case ErrorCode::Stagnation: return RL_STAGNATION;
    case ErrorCode::PreconditionViolated: return RL_PRECONDITION_VIOLATED;
    case ErrorCode::PassNotFound: return RL_PASS_NOT_FOUND;
    case ErrorCode::StiffnessFailure: return RL_STIFFNESS_FAILURE;
    case ErrorCode::Io: return RL_IO;
  }
  return RL_INTERNAL;
}

template <class F>
rl_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return RL_OK;
  } catch (const Error& e) {
    last_error = e.what();
    return map_code(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return RL_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return RL_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return RL_INTERNAL;
  }
}

template <class T>
void need(const T* ptr, const char* what) {
  require(ptr != nullptr, ErrorCode::InvalidArgument, std::string("null ") + what);
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void emit_json(const nlohmann::json& j, char** out) {
  need(out, "output string");
  *out = dup_string(j.dump(2));
}

rl_field* wrap(ScalarField f) { return new rl_field{std::move(f)}; }

MonotoneOptions monotone_from(const rl_monotone_options* o) {
  MonotoneOptions m;
  if (o) {
    m.tol_increment = o->tol_increment;
    m.tol_residual = o->tol_residual;
    m.divergence_cap = o->divergence_cap;
    m.max_iter = o->max_iter;
  }
  return m;
}

EvolutionConfig evolution_from(const rl_evolution_config* c) {
  EvolutionConfig cfg;
  if (!c) return cfg;
  cfg.dt0 = c->dt0;
  if (c->t_end > 0) cfg.t_end = c->t_end;
  cfg.blowup_cap = c->blowup_cap;
  cfg.dt_min = c->dt_min;
  cfg.steady_tol = c->steady_tol;
  cfg.growth_limit = c->growth_limit;
  cfg.increment_limit = c->increment_limit;
  cfg.quiet_steps = c->quiet_steps;
  cfg.sample_stride = c->sample_stride;
  cfg.diffusion = c->diffusion != 0;
  if (c->snapshot_count) {
    need(c->snapshot_times, "snapshot times");
    cfg.snapshot_times.assign(c->snapshot_times, c->snapshot_times + c->snapshot_count);
  }
  return cfg;
}

rl_solve_status solve_status(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return RL_CONVERGED;
    case SolveStatus::Diverged: return RL_DIVERGED;
    case SolveStatus::MaxIter: return RL_MAX_ITER;
  }
  return RL_MAX_ITER;
}

}  // namespace

extern "C" {

const char* rl_last_error(void) { return last_error.c_str(); }

const char* rl_status_name(rl_status status) {
  switch (status) {
    case RL_OK: return "ok";
    case RL_INVALID_ARGUMENT: return to_string(ErrorCode::InvalidArgument);
    case RL_GRID_MISMATCH: return to_string(ErrorCode::GridMismatch);
    case RL_NON_FINITE: return to_string(ErrorCode::NonFinite);
    case RL_SINGULAR_OPERATOR: return to_string(ErrorCode::SingularOperator);
    case RL_SOLVER_FAILURE: return to_string(ErrorCode::SolverFailure);
    case RL_INVALID_BRACKET: return to_string(ErrorCode::InvalidBracket);
    case RL_NON_MONOTONE_VERDICT: return to_string(ErrorCode::NonMonotoneVerdict);
    case RL_SINGULAR_JACOBIAN: return to_string(ErrorCode::SingularJacobian);
    case RL_STAGNATION: return to_string(ErrorCode::Stagnation);
    case RL_PRECONDITION_VIOLATED: return to_string(ErrorCode::PreconditionViolated);
    case RL_PASS_NOT_FOUND: return to_string(ErrorCode::PassNotFound);
    case RL_STIFFNESS_FAILURE: return to_string(ErrorCode::StiffnessFailure);
    case RL_IO: return to_string(ErrorCode::Io);
    case RL_INTERNAL: return "internal error";
  }
  return "unknown status";
}

void rl_string_free(char* s) { std::free(s); }

// --- grids -------------------------------------------------------------------

rl_status rl_grid_interval(double a, double b, int n, rl_grid** out) {
  return guarded([&] {
    need(out, "output");
    *out = new rl_grid{make_interval(a, b, n)};
  });
}

rl_status rl_grid_rectangle(double ax, double bx, double ay, double by, int n, rl_grid** out) {
  return guarded([&] {
    need(out, "output");
    *out = new rl_grid{make_rectangle(ax, bx, ay, by, n)};
  });
}

void rl_grid_free(rl_grid* grid) { delete grid; }
int rl_grid_dimension(const rl_grid* grid) { return grid ? grid->grid->dimension() : 0; }
size_t rl_grid_node_count(const rl_grid* grid) { return grid ? grid->grid->node_count() : 0; }
size_t rl_grid_boundary_count(const rl_grid* grid) { return grid ? grid->grid->boundary().size() : 0; }

rl_status rl_grid_coord(const rl_grid* grid, size_t node, double* x, double* y) {
  return guarded([&] {
    need(grid, "grid");
    require(node < grid->grid->node_count(), ErrorCode::InvalidArgument, "node index out of range");
    const Point p = grid->grid->coord(node);
    if (x) *x = p.x;
    if (y) *y = p.y;
  });
}

// --- fields ------------------------------------------------------------------

rl_status rl_field_from_values(const rl_grid* grid, const double* values, size_t count, rl_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "output");
    require(values != nullptr || count == 0, ErrorCode::InvalidArgument, "null values");
    *out = wrap(ScalarField(grid->grid, std::vector<double>(values, values + count)));
  });
}

rl_status rl_field_constant(const rl_grid* grid, double value, rl_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "output");
    *out = wrap(ScalarField::constant(grid->grid, value));
  });
}

void rl_field_free(rl_field* field) { delete field; }
size_t rl_field_size(const rl_field* field) { return field ? field->field.size() : 0; }

size_t rl_field_values(const rl_field* field, double* out, size_t count) {
  if (!field || !out) return 0;
  const size_t n = std::min(count, field->field.size());
  std::copy_n(field->field.values().begin(), n, out);
  return n;
}

double rl_field_max(const rl_field* field) { return field ? field->field.max() : 0.0; }
double rl_field_min(const rl_field* field) { return field ? field->field.min() : 0.0; }

rl_status rl_field_write_csv(const rl_field* field, const char* path) {
  return guarded([&] {
    need(field, "field");
    need(path, "path");
    write_field_csv(std::string(path), field->field);
  });
}

rl_status rl_field_read_csv(const rl_grid* grid, const char* path, rl_field** out) {
  return guarded([&] {
    need(grid, "grid");
    need(path, "path");
    need(out, "output");
    *out = wrap(read_field_csv(std::string(path), grid->grid));
  });
}

rl_status rl_field_difference(const rl_field* a, const rl_field* b, rl_field** out) {
  return guarded([&] {
    need(a, "field");
    need(b, "field");
    need(out, "output");
    require_same_grid(a->field.grid(), b->field.grid(), "rl_field_difference");
    *out = wrap(ScalarField(a->field.grid_ptr(), Eigen::VectorXd(a->field.vec() - b->field.vec())));
  });
}

rl_status rl_field_scaled(const rl_field* a, double factor, rl_field** out) {
  return guarded([&] {
    need(a, "field");
    need(out, "output");
    *out = wrap(ScalarField(a->field.grid_ptr(), Eigen::VectorXd(factor * a->field.vec())));
  });
}

rl_status rl_domain_integral(const rl_field* field, double* out) {
  return guarded([&] {
    need(field, "field");
    need(out, "output");
    *out = domain_integral(field->field);
  });
}

rl_status rl_boundary_integral(const rl_field* a, const rl_field* b, double* out) {
  return guarded([&] {
    need(a, "field");
    need(b, "field");
    need(out, "output");
    *out = boundary_integral(a->field, b->field);
  });
}

// --- problems ----------------------------------------------------------------

rl_status rl_problem_create(const rl_grid* grid, double p, double beta, const rl_field* f, rl_problem** out) {
  return guarded([&] {
    need(grid, "grid");
    need(f, "source");
    need(out, "output");
    *out = new rl_problem{ProblemSpec::make(grid->grid, p, beta, f->field)};
  });
}

rl_status rl_problem_with_beta(const rl_problem* problem, double beta, rl_problem** out) {
  return guarded([&] {
    need(problem, "problem");
    need(out, "output");
    *out = new rl_problem{problem->spec.with_beta(beta)};
  });
}

void rl_problem_free(rl_problem* problem) { delete problem; }
double rl_problem_beta(const rl_problem* problem) { return problem ? problem->spec.beta : 0.0; }

// --- torsion -----------------------------------------------------------------

rl_status rl_torsion_report(const rl_grid* grid, double p, double beta, rl_torsion** out) {
  return guarded([&] {
    need(grid, "grid");
    need(out, "output");
    *out = new rl_torsion{torsion_report(grid->grid, p, beta)};
  });
}

void rl_torsion_free(rl_torsion* report) { delete report; }

rl_status rl_torsion_constants(const rl_torsion* report, double* M_h, double* Lambda, double* gap, double* F_bound) {
  return guarded([&] {
    need(report, "torsion report");
    if (M_h) *M_h = report->report.M_h;
    if (Lambda) *Lambda = report->report.Lambda;
    if (gap) *gap = report->report.gap;
    if (F_bound) *F_bound = report->report.F_bound;
  });
}

rl_status rl_torsion_h(const rl_torsion* report, rl_field** out) {
  return guarded([&] {
    need(report, "torsion report");
    need(out, "output");
    *out = wrap(report->report.h);
  });
}

rl_status rl_torsion_phi_beta(const rl_torsion* report, rl_field** out) {
  return guarded([&] {
    need(report, "torsion report");
    need(out, "output");
    *out = wrap(report->report.phi_beta);
  });
}

rl_status rl_torsion_to_json(const rl_torsion* report, char** json) {
  return guarded([&] {
    need(report, "torsion report");
    emit_json(to_json(report->report), json);
  });
}

rl_status rl_condition_f(const rl_problem* problem, const rl_torsion* report, int* admissible, char** json) {
  return guarded([&] {
    need(problem, "problem");
    need(report, "torsion report");
    const ConditionF v = check_condition_F(problem->spec, report->report);
    if (admissible) *admissible = v.admissible() ? 1 : 0;
    if (json) emit_json(to_json(v), json);
  });
}

// --- stationary solves --------------------------------------------------------

void rl_monotone_options_default(rl_monotone_options* opts) {
  if (!opts) return;
  const MonotoneOptions d;
  *opts = {d.tol_increment, d.tol_residual, d.divergence_cap, d.max_iter};
}

void rl_newton_options_default(rl_newton_options* opts) {
  if (!opts) return;
  const NewtonOptions d;
  *opts = {d.tol, d.max_iter, d.cone_slack};
}

rl_status rl_monotone_iterate(const rl_problem* problem, const rl_monotone_options* opts, rl_solve** out) {
  return guarded([&] {
    need(problem, "problem");
    need(out, "output");
    *out = new rl_solve{monotone_iterate(problem->spec, monotone_from(opts))};
  });
}

rl_status rl_newton_refine(const rl_problem* problem, const rl_field* initial, const rl_newton_options* opts,
                           rl_solve** out) {
  return guarded([&] {
    need(problem, "problem");
    need(initial, "initial guess");
    need(out, "output");
    NewtonOptions n;
    if (opts) n = {opts->tol, opts->max_iter, opts->cone_slack};
    *out = new rl_solve{newton_refine(problem->spec, initial->field, n)};
  });
}

void rl_solve_free(rl_solve* report) { delete report; }
rl_solve_status rl_solve_status_of(const rl_solve* report) {
  return report ? solve_status(report->report.status) : RL_MAX_ITER;
}
int rl_solve_iterations(const rl_solve* report) { return report ? report->report.iterations : 0; }
double rl_solve_residual(const rl_solve* report) { return report ? report->report.residual_inf : 0.0; }

rl_status rl_solve_solution(const rl_solve* report, rl_field** out) {
  return guarded([&] {
    need(report, "solve report");
    need(out, "output");
    require(report->report.solution.has_value(), ErrorCode::InvalidArgument, "report carries no solution");
    *out = wrap(*report->report.solution);
  });
}

rl_status rl_solve_to_json(const rl_solve* report, char** json) {
  return guarded([&] {
    need(report, "solve report");
    emit_json(to_json(report->report), json);
  });
}

rl_status rl_stationary_residual(const rl_problem* problem, const rl_field* u, rl_field** out) {
  return guarded([&] {
    need(problem, "problem");
    need(u, "field");
    need(out, "output");
    *out = wrap(stationary_residual(problem->spec, u->field));
  });
}

// --- critical parameter -------------------------------------------------------

rl_status rl_find_beta_star(const rl_grid* grid, double p, const rl_field* f, double beta_lo, double beta_hi,
                            double tol, int sweep_points, const rl_monotone_options* opts, rl_beta_star** out) {
  return guarded([&] {
    need(grid, "grid");
    need(f, "source");
    need(out, "output");
    BetaStarOptions o;
    o.sweep_points = sweep_points;
    o.monotone = monotone_from(opts);
    *out = new rl_beta_star{find_beta_star(grid->grid, p, f->field, beta_lo, beta_hi, tol, o)};
  });
}

void rl_beta_star_free(rl_beta_star* result) { delete result; }

rl_status rl_beta_star_bracket(const rl_beta_star* result, double* beta_lo, double* beta_hi) {
  return guarded([&] {
    need(result, "beta star result");
    if (beta_lo) *beta_lo = result->result.beta_lo;
    if (beta_hi) *beta_hi = result->result.beta_hi;
  });
}

rl_status rl_beta_star_to_json(const rl_beta_star* result, char** json) {
  return guarded([&] {
    need(result, "beta star result");
    emit_json(to_json(result->result), json);
  });
}

// --- eigen -------------------------------------------------------------------

rl_status rl_linearized_eigen(const rl_problem* problem, const rl_field* U, rl_eigen** out) {
  return guarded([&] {
    need(problem, "problem");
    need(U, "field");
    need(out, "output");
    *out = new rl_eigen{linearized_eigen(problem->spec, U->field)};
  });
}

void rl_eigen_free(rl_eigen* report) { delete report; }
double rl_eigen_lambda1(const rl_eigen* report) { return report ? report->report.lambda1 : 0.0; }
double rl_eigen_residual(const rl_eigen* report) { return report ? report->report.residual : 0.0; }

rl_status rl_eigen_phi1(const rl_eigen* report, rl_field** out) {
  return guarded([&] {
    need(report, "eigen report");
    need(out, "output");
    *out = wrap(report->report.phi1);
  });
}

rl_status rl_eigen_to_json(const rl_eigen* report, char** json) {
  return guarded([&] {
    need(report, "eigen report");
    emit_json(to_json(report->report), json);
  });
}

// --- mountain pass ------------------------------------------------------------

rl_status rl_mountain_pass(const rl_problem* problem, const rl_field* U, rl_pass** out) {
  return guarded([&] {
    need(problem, "problem");
    need(U, "field");
    need(out, "output");
    *out = new rl_pass{mountain_pass_second(problem->spec, U->field)};
  });
}

void rl_pass_free(rl_pass* result) { delete result; }
rl_solve_status rl_pass_status(const rl_pass* result) {
  return result ? solve_status(result->result.report.status) : RL_MAX_ITER;
}
double rl_pass_residual(const rl_pass* result) { return result ? result->result.report.residual_inf : 0.0; }
double rl_pass_lambda1(const rl_pass* result) { return result ? result->result.lambda1 : 0.0; }

rl_status rl_pass_solution(const rl_pass* result, rl_field** out) {
  return guarded([&] {
    need(result, "mountain pass result");
    need(out, "output");
    require(result->result.report.solution.has_value(), ErrorCode::InvalidArgument, "no polished solution");
    *out = wrap(*result->result.report.solution);
  });
}

rl_status rl_pass_descent(const rl_pass* result, rl_field** out) {
  return guarded([&] {
    need(result, "mountain pass result");
    need(out, "output");
    *out = wrap(result->result.v_descent);
  });
}

rl_status rl_pass_write_history_csv(const rl_pass* result, const char* path) {
  return guarded([&] {
    need(result, "mountain pass result");
    need(path, "path");
    write_pass_history_csv(std::string(path), result->result.history);
  });
}

rl_status rl_pass_to_json(const rl_pass* result, char** json) {
  return guarded([&] {
    need(result, "mountain pass result");
    emit_json(to_json(result->result), json);
  });
}

rl_status rl_pass_g(double U, double v, double p, double* out) {
  return guarded([&] {
    need(out, "output");
    *out = pass_g(U, v, p);
  });
}

rl_status rl_pass_functional(const rl_problem* problem, const rl_field* U, const rl_field* v, double* value) {
  return guarded([&] {
    need(problem, "problem");
    need(U, "field");
    need(v, "field");
    need(value, "output");
    require_same_grid(U->field.grid(), v->field.grid(), "rl_pass_functional");
    *value = PassFunctional(problem->spec, U->field).value(v->field.vec());
  });
}

// --- orderings ---------------------------------------------------------------

rl_status rl_power_increment_ratio(double t, double b, double p, double* out) {
  return guarded([&] {
    need(out, "output");
    *out = power_increment_ratio(t, b, p);
  });
}

rl_status rl_secant_gap(double eta, double a, double b, double p, double* out) {
  return guarded([&] {
    need(out, "output");
    *out = secant_gap(eta, a, b, p);
  });
}

rl_status rl_build_threshold_datum(const rl_field* U, const rl_field* u_sol, double eta, rl_field** out) {
  return guarded([&] {
    need(U, "field");
    need(u_sol, "field");
    need(out, "output");
    *out = wrap(build_threshold_datum(U->field, u_sol->field, eta));
  });
}

rl_status rl_check_threshold_datum(const rl_problem* problem, const rl_field* datum, double eta, int* sign_ok,
                                   double* min_residual, double* max_residual) {
  return guarded([&] {
    need(problem, "problem");
    need(datum, "field");
    const DatumCheck c = check_threshold_datum(problem->spec, datum->field, eta);
    if (sign_ok) *sign_ok = c.holds ? 1 : 0;
    if (min_residual) *min_residual = c.min_residual;
    if (max_residual) *max_residual = c.max_residual;
  });
}

rl_status rl_intersection_identity(const rl_field* U, const rl_field* v1, const rl_field* v2,
                                   const rl_problem* problem, double* value, double* scale) {
  return guarded([&] {
    need(U, "field");
    need(v1, "field");
    need(v2, "field");
    need(problem, "problem");
    if (value) *value = intersection_identity_residual(U->field, v1->field, v2->field, problem->spec);
    if (scale) *scale = intersection_identity_scale(v1->field, v2->field);
  });
}

// --- parabolic ---------------------------------------------------------------

void rl_evolution_config_default(rl_evolution_config* cfg) {
  if (!cfg) return;
  const EvolutionConfig d;
  *cfg = {d.dt0, 0.0, d.blowup_cap, d.dt_min, d.steady_tol, d.growth_limit, d.increment_limit,
          d.quiet_steps, d.sample_stride, 1, nullptr, 0};
}

rl_status rl_evolve(const rl_problem* problem, const rl_field* u0, const rl_evolution_config* cfg, rl_trace** out) {
  return guarded([&] {
    need(problem, "problem");
    need(u0, "initial datum");
    need(out, "output");
    *out = new rl_trace{evolve(problem->spec, u0->field, evolution_from(cfg))};
  });
}

void rl_trace_free(rl_trace* trace) { delete trace; }

rl_verdict rl_trace_verdict(const rl_trace* trace) {
  if (!trace) return RL_GLOBAL_BOUNDED;
  switch (trace->trace.verdict) {
    case Verdict::GlobalBounded: return RL_GLOBAL_BOUNDED;
    case Verdict::ConvergedToSteady: return RL_CONVERGED_TO_STEADY;
    case Verdict::BlowUp: return RL_BLOW_UP;
  }
  return RL_GLOBAL_BOUNDED;
}

int rl_trace_t_detect(const rl_trace* trace, double* t) {
  if (!trace || !trace->trace.t_detect) return 0;
  if (t) *t = *trace->trace.t_detect;
  return 1;
}

size_t rl_trace_sample_count(const rl_trace* trace) { return trace ? trace->trace.samples.size() : 0; }

rl_status rl_trace_sample_at(const rl_trace* trace, size_t k, rl_trace_sample* out) {
  return guarded([&] {
    need(trace, "trace");
    need(out, "output");
    require(k < trace->trace.samples.size(), ErrorCode::InvalidArgument, "sample index out of range");
    const auto& s = trace->trace.samples[k];
    *out = {s.t, s.dt, s.max_u, s.E, s.dissipation, s.identity_residual, s.mass, s.mass_rate};
  });
}

rl_status rl_trace_final_field(const rl_trace* trace, rl_field** out) {
  return guarded([&] {
    need(trace, "trace");
    need(out, "output");
    require(trace->trace.final_field.has_value(), ErrorCode::InvalidArgument, "trace has no final field");
    *out = wrap(*trace->trace.final_field);
  });
}

size_t rl_trace_snapshot_count(const rl_trace* trace) { return trace ? trace->trace.snapshots.size() : 0; }

rl_status rl_trace_snapshot(const rl_trace* trace, size_t k, double* t, rl_field** out) {
  return guarded([&] {
    need(trace, "trace");
    need(out, "output");
    require(k < trace->trace.snapshots.size(), ErrorCode::InvalidArgument, "snapshot index out of range");
    if (t) *t = trace->trace.snapshots[k].t;
    *out = wrap(trace->trace.snapshots[k].u);
  });
}

rl_status rl_trace_write_csv(const rl_trace* trace, const char* path) {
  return guarded([&] {
    need(trace, "trace");
    need(path, "path");
    write_trace_csv(std::string(path), trace->trace);
  });
}

rl_status rl_trace_to_json(const rl_trace* trace, char** json) {
  return guarded([&] {
    need(trace, "trace");
    emit_json(verdict_json(trace->trace), json);
  });
}

rl_status rl_energy(const rl_problem* problem, const rl_field* u, double* out) {
  return guarded([&] {
    need(problem, "problem");
    need(u, "field");
    need(out, "output");
    *out = energy(problem->spec, u->field);
  });
}

rl_status rl_energy_floor(const rl_problem* problem, double* out) {
  return guarded([&] {
    need(problem, "problem");
    need(out, "output");
    *out = energy_floor(problem->spec);
  });
}

namespace {

rl_threshold* wrap_threshold(ThresholdVerdict v) {
  auto* out = new rl_threshold{std::move(v), {}, {}};
  out->below.trace = out->verdict.below_run;
  out->above.trace = out->verdict.above_run;
  return out;
}

}  // namespace

rl_status rl_threshold_experiment(const rl_problem* problem, const rl_field* U_min, const rl_field* u_other,
                                  double eta_below, double eta_above, const rl_evolution_config* cfg,
                                  rl_threshold** out) {
  return guarded([&] {
    need(problem, "problem");
    need(U_min, "field");
    need(u_other, "field");
    need(out, "output");
    *out = wrap_threshold(threshold_experiment(problem->spec, U_min->field, u_other->field, eta_below, eta_above,
                                               evolution_from(cfg)));
  });
}

rl_status rl_homogeneous_threshold(const rl_problem* problem, const rl_field* U, double eta_below, double eta_above,
                                   const rl_evolution_config* cfg, rl_threshold** out) {
  return guarded([&] {
    need(problem, "problem");
    need(U, "field");
    need(out, "output");
    *out = wrap_threshold(homogeneous_threshold(problem->spec, U->field, eta_below, eta_above, evolution_from(cfg)));
  });
}

void rl_threshold_free(rl_threshold* verdict) { delete verdict; }
const rl_trace* rl_threshold_below(const rl_threshold* verdict) { return verdict ? &verdict->below : nullptr; }
const rl_trace* rl_threshold_above(const rl_threshold* verdict) { return verdict ? &verdict->above : nullptr; }
int rl_threshold_as_expected(const rl_threshold* verdict) {
  return verdict && verdict->verdict.below_as_expected && verdict->verdict.above_as_expected ? 1 : 0;
}

rl_status rl_threshold_to_json(const rl_threshold* verdict, char** json) {
  return guarded([&] {
    need(verdict, "threshold verdict");
    emit_json(to_json(verdict->verdict), json);
  });
}

rl_status rl_boundedness_probe(const rl_problem* problem, const rl_field* u0, const rl_evolution_config* cfg,
                               char** json, rl_trace** trace) {
  return guarded([&] {
    need(problem, "problem");
    need(u0, "initial datum");
    BoundednessResult r = boundedness_probe(problem->spec, u0->field, evolution_from(cfg));
    if (json) emit_json(to_json(r), json);
    if (trace) *trace = new rl_trace{std::move(r.trace)};
  });
}

}  // extern "C"
