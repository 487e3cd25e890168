#pragma once

// Stationary problem -Δu = u^p + f with ∂u/∂ν + βu = 0: torsion constants,
// the monotone iteration for the minimal solution, Newton polishing, the
// critical Robin parameter, the linearized eigenvalue and the mountain-pass
// second solution.

#include "robinlab/discrete_ops.hpp"
#include "robinlab/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace robinlab {

// --- torsion ---------------------------------------------------------------

struct TorsionReport {
  double p;
  double beta;
  ScalarField h;         ///< Dirichlet torsion, -Δh = 1, h = 0 on ∂Ω
  ScalarField phi_beta;  ///< Robin torsion, -Δφ = 1, ∂φ/∂ν + βφ = 0
  double M_h;            ///< max h^p
  double Lambda;         ///< (1/(p M_h))^{1/(p-1)}
  double gap;            ///< Λ - Λ^p M_h
  double F_bound;        ///< ((p-1)/p) (1/(p M_h))^{1/(p-1)}
};

TorsionReport torsion_report(GridPtr grid, double p, double beta);

struct ConditionF {
  enum class Reason { Admissible, ZeroSource, BoundExceeded };
  Reason reason = Reason::Admissible;
  std::optional<std::size_t> node;  ///< first offending node
  double value = 0.0;               ///< f at that node
  double bound = 0.0;

  bool admissible() const noexcept { return reason == Reason::Admissible; }
  std::string describe() const;
};

/// 0 <= f < F_bound at every node and f > 0 somewhere.
ConditionF check_condition_F(const ProblemSpec& spec, const TorsionReport& report);

// --- nonlinear residuals -----------------------------------------------------

/// Nodal (u⁺)^p + f.
Eigen::VectorXd reaction(const ProblemSpec& spec, const Eigen::VectorXd& u);

/// Quadrature-weighted residual D(Au - u^p - f), the gradient of the discrete
/// stationary energy. Its ∞-norm is what every SolveReport calls residual_inf.
Eigen::VectorXd weighted_residual(const ProblemSpec& spec, const RobinOperator& op,
                                  const Eigen::VectorXd& u);

/// Strong nodal residual -Δu - u^p - f.
ScalarField stationary_residual(const ProblemSpec& spec, const ScalarField& u);

// --- iterations --------------------------------------------------------------

enum class SolveStatus { Converged, Diverged, MaxIter };

const char* to_string(SolveStatus status) noexcept;

struct IterationRecord {
  int iteration;
  double norm_inf;   ///< ‖u_j‖∞
  double increment;  ///< ‖u_j - u_{j-1}‖∞
  double residual;   ///< weighted residual after this iterate (NaN when not evaluated)
};

struct SolveReport {
  SolveStatus status = SolveStatus::MaxIter;
  std::optional<ScalarField> solution;
  int iterations = 0;
  double residual_inf = 0.0;
  std::vector<IterationRecord> history;
  std::size_t monotone_violations = 0;
};

struct MonotoneOptions {
  double tol_increment = 1e-10;
  double tol_residual = 1e-8;
  double divergence_cap = 1e6;
  int max_iter = 10000;
  /// Nodewise slack when checking u_{j+1} >= u_j.
  double ordering_slack = 1e-12;
};

/// u_0 = 0, -Δu_{j+1} = u_j^p + f with the Robin condition. The increasing
/// limit is the minimal solution; blow-up past the cap is the numerical
/// verdict of nonexistence.
SolveReport monotone_iterate(const ProblemSpec& spec, const MonotoneOptions& opts = {});

struct NewtonOptions {
  double tol = 1e-12;
  int max_iter = 50;
  double cone_slack = 1e-10;
};

/// Newton on Au = u^p + f with Jacobian A - p u^{p-1}; steps are shortened so
/// iterates stay in the nonnegative cone. Throws SingularJacobian.
SolveReport newton_refine(const ProblemSpec& spec, const ScalarField& initial,
                          const NewtonOptions& opts = {});

/// Strong-form Jacobian A - diag(p (u⁺)^{p-1}) as assembled by Newton.
SparseMatrix newton_jacobian(const ProblemSpec& spec, const ScalarField& u);

// --- critical parameter ------------------------------------------------------

struct BetaProbe {
  double beta;
  SolveStatus status;
  int iterations;
};

struct BetaStarResult {
  double beta_lo;  ///< largest probed β with a Diverged verdict
  double beta_hi;  ///< smallest probed β with a Converged verdict
  std::vector<BetaProbe> probes;

  double width() const noexcept { return beta_hi - beta_lo; }
};

struct BetaStarOptions {
  /// Log-spaced probes across the initial bracket, ends included; 0 skips the sweep.
  int sweep_points = 16;
  MonotoneOptions monotone;
};

/// Probes the monotone-iteration verdict at each β.
std::vector<BetaProbe> verdict_sweep(GridPtr grid, double p, const ScalarField& f,
                                     const std::vector<double>& betas,
                                     const MonotoneOptions& opts = {});

/// Throws NonMonotoneVerdict unless every Diverged probe lies below every
/// Converged probe. MaxIter probes are ignored.
void check_verdict_monotone(const std::vector<BetaProbe>& probes);

/// Bisects the verdict of monotone_iterate until the bracket is narrower than tol.
BetaStarResult find_beta_star(GridPtr grid, double p, const ScalarField& f, double beta_lo,
                              double beta_hi, double tol, const BetaStarOptions& opts = {});

// --- linearized eigenvalue -----------------------------------------------------

struct EigenReport {
  double lambda1;
  ScalarField phi1;  ///< ‖φ₁‖∞ = 1, φ₁ >= 0
  int iterations;
  double residual;   ///< ‖(A - pU^{p-1} - λ₁)φ₁‖∞
};

struct EigenOptions {
  int max_iter = 2000;
  double residual_tol = 1e-9;
};

/// Strong-form operator A - p U^{p-1} of the linearized problem.
SparseMatrix linearized_operator(const ProblemSpec& spec, const ScalarField& U);

/// Smallest eigenvalue of -Δφ - pU^{p-1}φ = λφ (Robin) by shifted inverse
/// iteration with the shift below the Gershgorin bound. Throws Stagnation.
EigenReport linearized_eigen(const ProblemSpec& spec, const ScalarField& U,
                             const EigenOptions& opts = {});

// --- mountain pass -------------------------------------------------------------

/// g(x,v) = (U+v⁺)^p - U^p - pU^{p-1}v⁺ at one node.
double pass_g(double U, double v, double p);
/// G(x,v) = ((U+v⁺)^{p+1} - U^{p+1})/(p+1) - U^p v⁺ - (p/2)U^{p-1}(v⁺)².
double pass_G(double U, double v, double p);

/// Discrete I(v) = ½‖v‖*² - ∫G(x, v⁺) around a fixed U, where
/// ‖v‖*² = vᵀ(S - pDU^{p-1})v = β∮v² + ∫|∇v|² - p∫U^{p-1}v².
class PassFunctional {
 public:
  PassFunctional(const ProblemSpec& spec, const ScalarField& U);

  double value(const Eigen::VectorXd& v) const;
  /// Euclidean gradient Kv - D g(v⁺).
  Eigen::VectorXd gradient(const Eigen::VectorXd& v) const;
  double norm_squared(const Eigen::VectorXd& v) const;
  Eigen::VectorXd g(const Eigen::VectorXd& v) const;

  const SparseMatrix& form() const noexcept { return form_; }
  const Eigen::VectorXd& weights() const noexcept { return weights_; }

 private:
  double p_;
  Eigen::VectorXd U_;
  Eigen::VectorXd weights_;
  SparseMatrix form_;
};

struct PassRecord {
  int iteration;
  double functional;     ///< I at the ray maximum
  double gradient_norm;  ///< ‖∇I‖ in the ‖·‖* metric
  double step;
  double norm_inf;       ///< ‖v‖∞
};

struct MountainPassOptions {
  int max_iter = 1000;
  double grad_tol = 1e-9;
  NewtonOptions newton;
};

struct MountainPassResult {
  SolveReport report;        ///< Newton polish; solution is u₂ = U + v
  ScalarField v_descent;     ///< v at the end of the descent, before polishing
  std::vector<PassRecord> history;
  double lambda1;            ///< linearized eigenvalue at U
  double endpoint_scale;     ///< t with I(tφ₁) < 0
};

/// Second solution U + v, v > 0, via steepest descent from the maximum of I
/// on the segment [0, tφ₁] with the maximum re-imposed along each ray.
/// Throws PreconditionViolated when λ₁ <= 0 and PassNotFound on collapse to 0.
MountainPassResult mountain_pass_second(const ProblemSpec& spec, const ScalarField& U,
                                        const MountainPassOptions& opts = {});

}  // namespace robinlab
