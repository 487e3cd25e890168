#pragma once

// Scalar comparison inequalities, sub/super-solution initial data between two
// ordered stationary solutions, and the intersection identity for pairs of
// solutions above the minimal one.

#include "robinlab/grid.hpp"

namespace robinlab {

/// ((t+b)^p - b^p)/t for t > 0, b > 0, p > 1; nondecreasing in t.
double power_increment_ratio(double t, double b, double p);

/// η(a^p - b^p) + b^p - (η(a-b)+b)^p for a > b > 0, p > 1, evaluated as
/// η d [R(d) - R(ηd)] with d = a - b and R the ratio above, so the value is
/// exactly 0 at η = 0 and η = 1. Accepts η < 0 while η(a-b)+b stays positive.
double secant_gap(double eta, double a, double b, double p);

/// η(u_sol - U) + U. Requires u_sol >= U, η >= 0 and η != 1.
ScalarField build_threshold_datum(const ScalarField& U, const ScalarField& u_sol, double eta);

struct DatumCheck {
  bool super_solution;  ///< expected sign: true for η < 1
  double min_residual;
  double max_residual;
  bool holds;
};

/// Checks the sign of -Δh - h^p - f at every node of a constructed datum:
/// >= -slack when η < 1, <= slack when η > 1.
DatumCheck check_threshold_datum(const ProblemSpec& spec, const ScalarField& datum, double eta,
                                 double slack = 1e-10);

/// ∫ [v₂((U+v₁)^p - U^p) - v₁((U+v₂)^p - U^p)] dx. Requires v₁, v₂ > 0 at
/// interior nodes.
double intersection_identity_residual(const ScalarField& U, const ScalarField& v1,
                                      const ScalarField& v2, const ProblemSpec& spec);

/// ‖v₁‖∞ ‖v₂‖∞, the scale the identity residual is compared against.
double intersection_identity_scale(const ScalarField& v1, const ScalarField& v2);

}  // namespace robinlab
