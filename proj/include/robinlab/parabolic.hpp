#pragma once

// Time integration of u_t - Δu = u^p + f with the Robin condition, energy
// bookkeeping, blow-up detection and the threshold experiments built on two
// ordered stationary solutions.

#include "robinlab/grid.hpp"

#include <optional>
#include <vector>

namespace robinlab {

struct EvolutionConfig {
  enum class Scheme { IMEX };

  double dt0 = 1e-3;
  /// Defaults to 50 diffusion times, 50 L² with L the longest side.
  std::optional<double> t_end;
  double blowup_cap = 1e6;
  double dt_min = 1e-12;
  double steady_tol = 1e-9;
  Scheme scheme = Scheme::IMEX;

  /// A step is rejected and dt halved when max u grows by more than
  /// growth_limit·max(max u, 1) or ‖Δu‖∞ exceeds increment_limit·max(max u, 1).
  double growth_limit = 0.1;
  double increment_limit = 0.1;
  /// Accepted steps without rejection before dt doubles again (capped at dt0).
  int quiet_steps = 20;
  /// Record every k-th accepted step; the first and last steps are always kept.
  int sample_stride = 1;
  std::size_t max_steps = 20'000'000;
  /// Field snapshots at the first accepted step reaching each time.
  std::vector<double> snapshot_times;
  /// Test hook: drop the Laplacian so each node follows u' = u^p + f.
  bool diffusion = true;

  double resolved_t_end(const Grid& grid) const;
  void validate() const;
};

enum class Verdict { GlobalBounded, ConvergedToSteady, BlowUp };

const char* to_string(Verdict v) noexcept;

struct TraceSample {
  double t;
  double dt;
  double max_u;
  double E;
  double dissipation;        ///< ∫|u_t|² with u_t the step difference quotient
  double identity_residual;  ///< E(t+dt) - E(t) + dt·dissipation
  double mass;               ///< ∫u²
  double mass_rate;          ///< -4E + (2(p-1)/(p+1))∫(u⁺)^{p+1} - 2∫fu
};

struct Snapshot {
  double t;
  ScalarField u;
};

struct EnergyTrace {
  std::vector<TraceSample> samples;
  Verdict verdict = Verdict::GlobalBounded;
  std::optional<double> t_detect;
  /// Steady limit for ConvergedToSteady, last state otherwise.
  std::optional<ScalarField> final_field;
  std::vector<Snapshot> snapshots;
  std::size_t steps = 0;
  std::size_t rejected_steps = 0;
};

/// IMEX steps (Id + dt L)u^{n+1} = u^n + dt((u^n)^p + f) with adaptive dt.
/// Throws StiffnessFailure when dt falls below dt_min, or when max u reaches
/// the cap without a growing growth rate.
EnergyTrace evolve(const ProblemSpec& spec, const ScalarField& u0, const EvolutionConfig& cfg = {});

/// ½uᵀSu - ∫(u⁺)^{p+1}/(p+1) - ∫fu with S the symmetrized Robin operator.
double energy(const ProblemSpec& spec, const ScalarField& u);

/// -¼(2^{p+1}p/(p-1))^{1/p} ∫f^{(p+1)/p}; runs whose energy drops below must blow up.
double energy_floor(const ProblemSpec& spec);

struct ThresholdVerdict {
  EnergyTrace below_run;
  EnergyTrace above_run;
  /// ‖u(t_end) - limit‖∞ of the below run, limit being U_min (or 0 for f ≡ 0).
  std::optional<double> limit_distance;
  bool below_as_expected = false;
  bool above_as_expected = false;
};

struct ThresholdOptions {
  double limit_tol = 1e-6;
  /// Run the below and above data on separate threads.
  bool concurrent = true;
};

/// Evolves η(u_other - U_min) + U_min for η below and above 1. The expected
/// outcome is convergence to U_min below and blow-up above.
ThresholdVerdict threshold_experiment(const ProblemSpec& spec, const ScalarField& U_min,
                                      const ScalarField& u_other, double eta_below, double eta_above,
                                      const EvolutionConfig& cfg = {}, const ThresholdOptions& opts = {});

/// With f ≡ 0 and a positive steady state U: η U decays to 0 for η < 1 and
/// blows up for η > 1.
ThresholdVerdict homogeneous_threshold(const ProblemSpec& spec_f0, const ScalarField& U, double eta_below,
                                       double eta_above, const EvolutionConfig& cfg = {},
                                       const ThresholdOptions& opts = {});

struct BoundednessResult {
  double bound_estimate;  ///< sup of max u over the trace (infinite for blow-up runs)
  double energy_floor;
  bool floor_crossed;
  /// Energy below the floor implies a BlowUp verdict.
  bool floor_implication_holds;
  EnergyTrace trace;
};

BoundednessResult boundedness_probe(const ProblemSpec& spec, const ScalarField& u0,
                                    const EvolutionConfig& cfg = {});

}  // namespace robinlab
