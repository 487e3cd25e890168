#include "robinlab/orderings.hpp"

#include "robinlab/elliptic.hpp"
#include "robinlab/error.hpp"

#include <cmath>

namespace robinlab {

namespace {

// ((t+b)^p - b^p)/t for t > -b, t != 0; b >= 0.
double ratio(double t, double b, double p) {
  if (b == 0.0) return std::pow(t, p - 1.0);
  if (std::abs(t) < 1e-8 * b) return p * std::pow(b, p - 1.0) * (1.0 + (p - 1.0) * t / (2.0 * b));
  return std::pow(b, p) * std::expm1(p * std::log1p(t / b)) / t;
}

}  // namespace

double power_increment_ratio(double t, double b, double p) {
  require(std::isfinite(t) && t > 0.0, ErrorCode::InvalidArgument, "power_increment_ratio: t must be positive");
  require(std::isfinite(b) && b > 0.0, ErrorCode::InvalidArgument, "power_increment_ratio: b must be positive");
  require(std::isfinite(p) && p > 1.0, ErrorCode::InvalidArgument, "power_increment_ratio: p must exceed 1");
  return ratio(t, b, p);
}

double secant_gap(double eta, double a, double b, double p) {
  require(std::isfinite(b) && b > 0.0, ErrorCode::InvalidArgument, "secant_gap: b must be positive");
  require(std::isfinite(a) && a > b, ErrorCode::InvalidArgument, "secant_gap: requires a > b");
  require(std::isfinite(p) && p > 1.0, ErrorCode::InvalidArgument, "secant_gap: p must exceed 1");
  const double d = a - b;
  require(std::isfinite(eta) && b + eta * d > 0.0, ErrorCode::InvalidArgument,
          "secant_gap: eta(a-b)+b must stay positive");
  if (eta == 0.0) return 0.0;
  return eta * d * (ratio(d, b, p) - ratio(eta * d, b, p));
}

ScalarField build_threshold_datum(const ScalarField& U, const ScalarField& u_sol, double eta) {
  require_same_grid(U.grid(), u_sol.grid(), "build_threshold_datum");
  require(std::isfinite(eta) && eta >= 0.0, ErrorCode::InvalidArgument,
          "build_threshold_datum: eta must be nonnegative");
  require(eta != 1.0, ErrorCode::InvalidArgument,
          "build_threshold_datum: eta = 1 reproduces the solution, which is neither strict sub- nor super-solution");
  std::vector<double> out(U.size());
  for (std::size_t i = 0; i < U.size(); ++i) {
    require(u_sol[i] >= U[i] - 1e-10, ErrorCode::InvalidArgument,
            "build_threshold_datum: u_sol lies below U at node " + std::to_string(i));
    out[i] = eta * (u_sol[i] - U[i]) + U[i];
  }
  return ScalarField(U.grid_ptr(), std::move(out));
}

DatumCheck check_threshold_datum(const ProblemSpec& spec, const ScalarField& datum, double eta, double slack) {
  const ScalarField r = stationary_residual(spec, datum);
  DatumCheck out{eta < 1.0, r.min(), r.max(), false};
  out.holds = out.super_solution ? out.min_residual >= -slack : out.max_residual <= slack;
  return out;
}

double intersection_identity_residual(const ScalarField& U, const ScalarField& v1, const ScalarField& v2,
                                      const ProblemSpec& spec) {
  require_same_grid(*spec.grid, U.grid(), "intersection_identity_residual");
  require_same_grid(U.grid(), v1.grid(), "intersection_identity_residual");
  require_same_grid(U.grid(), v2.grid(), "intersection_identity_residual");
  for (std::size_t k : spec.grid->interior())
    require(v1[k] > 0.0 && v2[k] > 0.0, ErrorCode::InvalidArgument,
            "intersection_identity_residual: v1 and v2 must be positive at interior node " + std::to_string(k));
  const auto w = spec.grid->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < U.size(); ++i) {
    const double a = std::max(v1[i], 0.0);
    const double b = std::max(v2[i], 0.0);
    if (a == 0.0 || b == 0.0) continue;
    const double base = std::max(U[i], 0.0);
    s += w[i] * a * b * (ratio(a, base, spec.p) - ratio(b, base, spec.p));
  }
  return s;
}

double intersection_identity_scale(const ScalarField& v1, const ScalarField& v2) {
  return v1.norm_inf() * v2.norm_inf();
}

}  // namespace robinlab
