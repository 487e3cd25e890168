#ifndef ROBINLAB_ROBINLAB_H
#define ROBINLAB_ROBINLAB_H

/*
 * C interface to the Robin-problem laboratory. Every object is an opaque
 * handle released by its matching *_free function. Functions return an
 * rl_status; on failure rl_last_error() describes the problem for the calling
 * thread. Strings handed out by the library are released with rl_string_free.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(ROBINLAB_BUILD)
#    define RL_API __declspec(dllexport)
#  else
#    define RL_API __declspec(dllimport)
#  endif
#else
#  define RL_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum rl_status {
  RL_OK = 0,
  RL_INVALID_ARGUMENT,
  RL_GRID_MISMATCH,
  RL_NON_FINITE,
  RL_SINGULAR_OPERATOR,
  RL_SOLVER_FAILURE,
  RL_INVALID_BRACKET,
  RL_NON_MONOTONE_VERDICT,
  RL_SINGULAR_JACOBIAN,
  RL_STAGNATION,
  RL_PRECONDITION_VIOLATED,
  RL_PASS_NOT_FOUND,
  RL_STIFFNESS_FAILURE,
  RL_IO,
  RL_INTERNAL
} rl_status;

typedef enum rl_solve_status { RL_CONVERGED = 0, RL_DIVERGED = 1, RL_MAX_ITER = 2 } rl_solve_status;

typedef enum rl_verdict { RL_GLOBAL_BOUNDED = 0, RL_CONVERGED_TO_STEADY = 1, RL_BLOW_UP = 2 } rl_verdict;

typedef struct rl_grid rl_grid;
typedef struct rl_field rl_field;
typedef struct rl_problem rl_problem;
typedef struct rl_torsion rl_torsion;
typedef struct rl_solve rl_solve;
typedef struct rl_beta_star rl_beta_star;
typedef struct rl_eigen rl_eigen;
typedef struct rl_pass rl_pass;
typedef struct rl_trace rl_trace;
typedef struct rl_threshold rl_threshold;

RL_API const char* rl_last_error(void);
RL_API const char* rl_status_name(rl_status status);
RL_API void rl_string_free(char* s);

/* grids ------------------------------------------------------------------ */

RL_API rl_status rl_grid_interval(double a, double b, int n, rl_grid** out);
RL_API rl_status rl_grid_rectangle(double ax, double bx, double ay, double by, int n, rl_grid** out);
RL_API void rl_grid_free(rl_grid* grid);
RL_API int rl_grid_dimension(const rl_grid* grid);
RL_API size_t rl_grid_node_count(const rl_grid* grid);
RL_API size_t rl_grid_boundary_count(const rl_grid* grid);
RL_API rl_status rl_grid_coord(const rl_grid* grid, size_t node, double* x, double* y);

/* fields ----------------------------------------------------------------- */

RL_API rl_status rl_field_from_values(const rl_grid* grid, const double* values, size_t count, rl_field** out);
RL_API rl_status rl_field_constant(const rl_grid* grid, double value, rl_field** out);
RL_API void rl_field_free(rl_field* field);
RL_API size_t rl_field_size(const rl_field* field);
/* Copies min(count, size) values into out. */
RL_API size_t rl_field_values(const rl_field* field, double* out, size_t count);
RL_API double rl_field_max(const rl_field* field);
RL_API double rl_field_min(const rl_field* field);
RL_API rl_status rl_field_write_csv(const rl_field* field, const char* path);
RL_API rl_status rl_field_read_csv(const rl_grid* grid, const char* path, rl_field** out);
/* a - b */
RL_API rl_status rl_field_difference(const rl_field* a, const rl_field* b, rl_field** out);
RL_API rl_status rl_field_scaled(const rl_field* a, double factor, rl_field** out);
RL_API rl_status rl_domain_integral(const rl_field* field, double* out);
RL_API rl_status rl_boundary_integral(const rl_field* a, const rl_field* b, double* out);

/* problems --------------------------------------------------------------- */

RL_API rl_status rl_problem_create(const rl_grid* grid, double p, double beta, const rl_field* f, rl_problem** out);
RL_API rl_status rl_problem_with_beta(const rl_problem* problem, double beta, rl_problem** out);
RL_API void rl_problem_free(rl_problem* problem);
RL_API double rl_problem_beta(const rl_problem* problem);

/* torsion and condition (F) ---------------------------------------------- */

RL_API rl_status rl_torsion_report(const rl_grid* grid, double p, double beta, rl_torsion** out);
RL_API void rl_torsion_free(rl_torsion* report);
RL_API rl_status rl_torsion_constants(const rl_torsion* report, double* M_h, double* Lambda, double* gap,
                                      double* F_bound);
RL_API rl_status rl_torsion_h(const rl_torsion* report, rl_field** out);
RL_API rl_status rl_torsion_phi_beta(const rl_torsion* report, rl_field** out);
RL_API rl_status rl_torsion_to_json(const rl_torsion* report, char** json);
/* admissible is set to 1 or 0; json receives the verdict document. */
RL_API rl_status rl_condition_f(const rl_problem* problem, const rl_torsion* report, int* admissible, char** json);

/* stationary solves ------------------------------------------------------ */

typedef struct rl_monotone_options {
  double tol_increment;
  double tol_residual;
  double divergence_cap;
  int max_iter;
} rl_monotone_options;

typedef struct rl_newton_options {
  double tol;
  int max_iter;
  double cone_slack;
} rl_newton_options;

RL_API void rl_monotone_options_default(rl_monotone_options* opts);
RL_API void rl_newton_options_default(rl_newton_options* opts);

/* opts may be NULL for defaults. */
RL_API rl_status rl_monotone_iterate(const rl_problem* problem, const rl_monotone_options* opts, rl_solve** out);
RL_API rl_status rl_newton_refine(const rl_problem* problem, const rl_field* initial, const rl_newton_options* opts,
                                  rl_solve** out);
RL_API void rl_solve_free(rl_solve* report);
RL_API rl_solve_status rl_solve_status_of(const rl_solve* report);
RL_API int rl_solve_iterations(const rl_solve* report);
RL_API double rl_solve_residual(const rl_solve* report);
/* RL_INVALID_ARGUMENT when the report carries no solution. */
RL_API rl_status rl_solve_solution(const rl_solve* report, rl_field** out);
RL_API rl_status rl_solve_to_json(const rl_solve* report, char** json);

RL_API rl_status rl_stationary_residual(const rl_problem* problem, const rl_field* u, rl_field** out);

/* critical parameter ----------------------------------------------------- */

RL_API rl_status rl_find_beta_star(const rl_grid* grid, double p, const rl_field* f, double beta_lo, double beta_hi,
                                   double tol, int sweep_points, const rl_monotone_options* opts,
                                   rl_beta_star** out);
RL_API void rl_beta_star_free(rl_beta_star* result);
RL_API rl_status rl_beta_star_bracket(const rl_beta_star* result, double* beta_lo, double* beta_hi);
RL_API rl_status rl_beta_star_to_json(const rl_beta_star* result, char** json);

/* linearized eigenvalue -------------------------------------------------- */

RL_API rl_status rl_linearized_eigen(const rl_problem* problem, const rl_field* U, rl_eigen** out);
RL_API void rl_eigen_free(rl_eigen* report);
RL_API double rl_eigen_lambda1(const rl_eigen* report);
RL_API double rl_eigen_residual(const rl_eigen* report);
RL_API rl_status rl_eigen_phi1(const rl_eigen* report, rl_field** out);
RL_API rl_status rl_eigen_to_json(const rl_eigen* report, char** json);

/* mountain pass ---------------------------------------------------------- */

RL_API rl_status rl_mountain_pass(const rl_problem* problem, const rl_field* U, rl_pass** out);
RL_API void rl_pass_free(rl_pass* result);
RL_API rl_solve_status rl_pass_status(const rl_pass* result);
RL_API double rl_pass_residual(const rl_pass* result);
RL_API double rl_pass_lambda1(const rl_pass* result);
/* Polished second solution U + v. */
RL_API rl_status rl_pass_solution(const rl_pass* result, rl_field** out);
/* v at the end of the descent, before Newton polishing. */
RL_API rl_status rl_pass_descent(const rl_pass* result, rl_field** out);
RL_API rl_status rl_pass_write_history_csv(const rl_pass* result, const char* path);
RL_API rl_status rl_pass_to_json(const rl_pass* result, char** json);
RL_API rl_status rl_pass_g(double U, double v, double p, double* out);
RL_API rl_status rl_pass_functional(const rl_problem* problem, const rl_field* U, const rl_field* v, double* value);

/* orderings -------------------------------------------------------------- */

RL_API rl_status rl_power_increment_ratio(double t, double b, double p, double* out);
RL_API rl_status rl_secant_gap(double eta, double a, double b, double p, double* out);
RL_API rl_status rl_build_threshold_datum(const rl_field* U, const rl_field* u_sol, double eta, rl_field** out);
/* sign_ok is 1 when the datum is a super-solution (eta < 1) or sub-solution (eta > 1). */
RL_API rl_status rl_check_threshold_datum(const rl_problem* problem, const rl_field* datum, double eta,
                                          int* sign_ok, double* min_residual, double* max_residual);
RL_API rl_status rl_intersection_identity(const rl_field* U, const rl_field* v1, const rl_field* v2,
                                          const rl_problem* problem, double* value, double* scale);

/* parabolic -------------------------------------------------------------- */

typedef struct rl_evolution_config {
  double dt0;
  double t_end; /* <= 0 selects 50 L^2 */
  double blowup_cap;
  double dt_min;
  double steady_tol;
  double growth_limit;
  double increment_limit;
  int quiet_steps;
  int sample_stride;
  int diffusion; /* 0 disables the Laplacian (test hook) */
  const double* snapshot_times;
  size_t snapshot_count;
} rl_evolution_config;

typedef struct rl_trace_sample {
  double t;
  double dt;
  double max_u;
  double E;
  double dissipation;
  double identity_residual;
  double mass;
  double mass_rate;
} rl_trace_sample;

RL_API void rl_evolution_config_default(rl_evolution_config* cfg);

RL_API rl_status rl_evolve(const rl_problem* problem, const rl_field* u0, const rl_evolution_config* cfg,
                           rl_trace** out);
RL_API void rl_trace_free(rl_trace* trace);
RL_API rl_verdict rl_trace_verdict(const rl_trace* trace);
/* Returns 0 when no blow-up was detected. */
RL_API int rl_trace_t_detect(const rl_trace* trace, double* t);
RL_API size_t rl_trace_sample_count(const rl_trace* trace);
RL_API rl_status rl_trace_sample_at(const rl_trace* trace, size_t k, rl_trace_sample* out);
RL_API rl_status rl_trace_final_field(const rl_trace* trace, rl_field** out);
RL_API size_t rl_trace_snapshot_count(const rl_trace* trace);
RL_API rl_status rl_trace_snapshot(const rl_trace* trace, size_t k, double* t, rl_field** out);
RL_API rl_status rl_trace_write_csv(const rl_trace* trace, const char* path);
RL_API rl_status rl_trace_to_json(const rl_trace* trace, char** json);

RL_API rl_status rl_energy(const rl_problem* problem, const rl_field* u, double* out);
RL_API rl_status rl_energy_floor(const rl_problem* problem, double* out);

RL_API rl_status rl_threshold_experiment(const rl_problem* problem, const rl_field* U_min, const rl_field* u_other,
                                         double eta_below, double eta_above, const rl_evolution_config* cfg,
                                         rl_threshold** out);
RL_API rl_status rl_homogeneous_threshold(const rl_problem* problem, const rl_field* U, double eta_below,
                                          double eta_above, const rl_evolution_config* cfg, rl_threshold** out);
RL_API void rl_threshold_free(rl_threshold* verdict);
/* Borrowed views, valid until the threshold handle is freed. */
RL_API const rl_trace* rl_threshold_below(const rl_threshold* verdict);
RL_API const rl_trace* rl_threshold_above(const rl_threshold* verdict);
RL_API int rl_threshold_as_expected(const rl_threshold* verdict);
RL_API rl_status rl_threshold_to_json(const rl_threshold* verdict, char** json);

/* The trace handle is written to *trace and must be freed by the caller. */
RL_API rl_status rl_boundedness_probe(const rl_problem* problem, const rl_field* u0, const rl_evolution_config* cfg,
                                      char** json, rl_trace** trace);

#ifdef __cplusplus
}
#endif

#endif
