#include "robinlab/parabolic.hpp"

#include "robinlab/discrete_ops.hpp"
#include "robinlab/error.hpp"
#include "robinlab/orderings.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>
#include <map>
#include <sstream>

namespace robinlab {

const char* to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::GlobalBounded: return "GlobalBounded";
    case Verdict::ConvergedToSteady: return "ConvergedToSteady";
    case Verdict::BlowUp: return "BlowUp";
  }
  return "unknown";
}

double EvolutionConfig::resolved_t_end(const Grid& grid) const {
  if (t_end) return *t_end;
  double L = 0.0;
  if (const auto* iv = std::get_if<IntervalDomain>(&grid.domain())) {
    L = iv->b - iv->a;
  } else {
    const auto& r = std::get<RectangleDomain>(grid.domain());
    L = std::max(r.bx - r.ax, r.by - r.ay);
  }
  return 50.0 * L * L;
}

void EvolutionConfig::validate() const {
  require(std::isfinite(dt_min) && dt_min > 0.0 && std::isfinite(dt0) && dt0 > dt_min,
          ErrorCode::InvalidArgument, "evolution config needs dt0 > dt_min > 0");
  require(std::isfinite(blowup_cap) && blowup_cap > 1.0, ErrorCode::InvalidArgument,
          "evolution config needs blowup_cap > 1");
  require(steady_tol > 0.0, ErrorCode::InvalidArgument, "evolution config needs steady_tol > 0");
  require(!t_end || (std::isfinite(*t_end) && *t_end > 0.0), ErrorCode::InvalidArgument,
          "evolution config needs t_end > 0");
  require(growth_limit > 0.0 && increment_limit > 0.0 && quiet_steps > 0 && sample_stride > 0,
          ErrorCode::InvalidArgument, "evolution config step-control parameters must be positive");
}

namespace {

Eigen::VectorXd weight_vector(const Grid& g) {
  const auto w = g.weights();
  return Eigen::Map<const Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
}

class Stepper {
 public:
  Stepper(const ProblemSpec& spec, bool diffusion)
      : spec_(spec), op_(spec.grid, spec.beta), w_(weight_vector(*spec.grid)), f_(spec.f.vec()),
        diffusion_(diffusion) {}

  Eigen::VectorXd reaction(const Eigen::VectorXd& u) const {
    Eigen::VectorXd out(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) out[i] = (u[i] > 0.0 ? std::pow(u[i], spec_.p) : 0.0) + f_[i];
    return out;
  }

  Eigen::VectorXd step(const Eigen::VectorXd& u, double dt) {
    const Eigen::VectorXd explicit_part = u + dt * reaction(u);
    if (!diffusion_) return explicit_part;
    return factor(dt).solve(w_.cwiseProduct(explicit_part));
  }

  struct Parts {
    double E;
    double power_integral;  // ∫(u⁺)^{p+1}
    double source_integral;  // ∫fu
    double mass;
  };

  Parts parts(const Eigen::VectorXd& u) const {
    const double p = spec_.p;
    double pw = 0.0, src = 0.0, mass = 0.0;
    for (Eigen::Index i = 0; i < u.size(); ++i) {
      if (u[i] > 0.0) pw += w_[i] * std::pow(u[i], p + 1.0);
      src += w_[i] * f_[i] * u[i];
      mass += w_[i] * u[i] * u[i];
    }
    const double quad = diffusion_ ? 0.5 * u.dot(op_.symmetrized() * u) : 0.0;
    return {quad - pw / (p + 1.0) - src, pw, src, mass};
  }

  double mass_rate(const Parts& q) const {
    const double p = spec_.p;
    return -4.0 * q.E + 2.0 * (p - 1.0) / (p + 1.0) * q.power_integral - 2.0 * q.source_integral;
  }

  double dissipation(const Eigen::VectorXd& du, double dt) const {
    return w_.dot(du.cwiseProduct(du)) / (dt * dt);
  }

 private:
  const SpdFactorization& factor(double dt) {
    auto it = cache_.find(dt);
    if (it == cache_.end()) {
      SparseMatrix m = dt * op_.symmetrized();
      for (Eigen::Index i = 0; i < w_.size(); ++i) m.coeffRef(i, i) += w_[i];
      m.makeCompressed();
      it = cache_.emplace(dt, SpdFactorization(m, spec_.grid->cells_per_axis() > LinearSolverOptions{}.direct_limit))
               .first;
    }
    return it->second;
  }

  const ProblemSpec& spec_;
  RobinOperator op_;
  Eigen::VectorXd w_;
  Eigen::VectorXd f_;
  bool diffusion_;
  std::map<double, SpdFactorization> cache_;
};

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

EnergyTrace evolve(const ProblemSpec& spec, const ScalarField& u0, const EvolutionConfig& cfg) {
  cfg.validate();
  require_same_grid(*spec.grid, u0.grid(), "evolve");
  require(u0.min() >= -1e-12, ErrorCode::InvalidArgument, "evolve: initial datum must be nonnegative");
  require(spec.beta > 0.0 || !cfg.diffusion, ErrorCode::InvalidArgument, "evolve needs beta > 0");
  const double t_end = cfg.resolved_t_end(*spec.grid);

  Stepper stepper(spec, cfg.diffusion);
  EnergyTrace trace;
  Eigen::VectorXd u = u0.vec();
  double t = 0.0;
  double dt = cfg.dt0;
  int quiet = 0;
  auto parts = stepper.parts(u);
  trace.samples.push_back({0.0, 0.0, u.maxCoeff(), parts.E, 0.0, 0.0, parts.mass, stepper.mass_rate(parts)});
  std::size_t next_snapshot = 0;
  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  while (next_snapshot < snaps.size() && snaps[next_snapshot] <= 0.0) {
    trace.snapshots.push_back({0.0, u0});
    ++next_snapshot;
  }

  double prev_rate = -std::numeric_limits<double>::infinity();
  int rate_increases = 0;
  TraceSample pending{};
  bool have_pending = false;

  while (t < t_end) {
    require(trace.steps < cfg.max_steps, ErrorCode::StiffnessFailure,
            "evolve: step budget exhausted at t=" + fmt(t));
    const double remaining = t_end - t;
    const double h = remaining <= dt * (1.0 + 1e-6) ? remaining : dt;
    const double m0 = u.maxCoeff();
    const Eigen::VectorXd next = stepper.step(u, h);
    const Eigen::VectorXd du = next - u;
    const double m1 = next.maxCoeff();
    const double scale = std::max(std::abs(m0), 1.0);
    const double inc = du.lpNorm<Eigen::Infinity>();
    if (!next.allFinite() || m1 - m0 > cfg.growth_limit * scale || inc > cfg.increment_limit * scale) {
      ++trace.rejected_steps;
      dt *= 0.5;
      quiet = 0;
      require(dt >= cfg.dt_min, ErrorCode::StiffnessFailure,
              "evolve: dt fell below dt_min at t=" + fmt(t) + " with max u=" + fmt(m0) +
                  " before the blow-up cap was reached");
      continue;
    }

    const auto next_parts = stepper.parts(next);
    const double diss = stepper.dissipation(du, h);
    t += h;
    ++trace.steps;
    TraceSample s{t, h, m1, next_parts.E, diss, next_parts.E - parts.E + h * diss, next_parts.mass,
                  stepper.mass_rate(next_parts)};
    u = next;
    parts = next_parts;

    while (next_snapshot < snaps.size() && snaps[next_snapshot] <= t) {
      trace.snapshots.push_back({t, ScalarField(spec.grid, u)});
      ++next_snapshot;
    }

    const double rate = (m1 - m0) / h;
    rate_increases = rate > prev_rate ? rate_increases + 1 : 0;
    prev_rate = rate;

    const bool steady = inc / h < cfg.steady_tol;
    const bool capped = m1 >= cfg.blowup_cap;
    const bool keep = steady || capped || t >= t_end || trace.steps % static_cast<std::size_t>(cfg.sample_stride) == 0;
    if (keep) {
      trace.samples.push_back(s);
      have_pending = false;
    } else {
      pending = s;
      have_pending = true;
    }

    if (steady) {
      trace.verdict = Verdict::ConvergedToSteady;
      trace.final_field.emplace(spec.grid, u);
      return trace;
    }
    if (capped) {
      require(rate_increases >= 2 && dt < cfg.dt0, ErrorCode::StiffnessFailure,
              "evolve: max u reached the cap at t=" + fmt(t) + " without an accelerating growth rate");
      trace.verdict = Verdict::BlowUp;
      trace.t_detect = t;
      trace.final_field.emplace(spec.grid, u);
      return trace;
    }

    if (++quiet >= cfg.quiet_steps && dt < cfg.dt0) {
      dt = std::min(cfg.dt0, 2.0 * dt);
      quiet = 0;
    }
  }
  if (have_pending) trace.samples.push_back(pending);
  trace.verdict = Verdict::GlobalBounded;
  trace.final_field.emplace(spec.grid, u);
  return trace;
}

double energy(const ProblemSpec& spec, const ScalarField& u) {
  require_same_grid(*spec.grid, u.grid(), "energy");
  return Stepper(spec, true).parts(u.vec()).E;
}

double energy_floor(const ProblemSpec& spec) {
  const double p = spec.p;
  const auto w = spec.grid->weights();
  double s = 0.0;
  for (std::size_t i = 0; i < spec.f.size(); ++i) s += w[i] * std::pow(spec.f[i], (p + 1.0) / p);
  if (s == 0.0) return 0.0;
  return -0.25 * std::pow(std::pow(2.0, p + 1.0) * p / (p - 1.0), 1.0 / p) * s;
}

namespace {

std::pair<EnergyTrace, EnergyTrace> run_pair(const ProblemSpec& spec, const ScalarField& below,
                                             const ScalarField& above, const EvolutionConfig& cfg,
                                             bool concurrent) {
  if (!concurrent) return {evolve(spec, below, cfg), evolve(spec, above, cfg)};
  auto fut = std::async(std::launch::async, [&] { return evolve(spec, above, cfg); });
  EnergyTrace b = evolve(spec, below, cfg);
  return {std::move(b), fut.get()};
}

double distance(const ScalarField& a, const ScalarField& b) {
  return (a.vec() - b.vec()).lpNorm<Eigen::Infinity>();
}

}  // namespace

ThresholdVerdict threshold_experiment(const ProblemSpec& spec, const ScalarField& U_min,
                                      const ScalarField& u_other, double eta_below, double eta_above,
                                      const EvolutionConfig& cfg, const ThresholdOptions& opts) {
  require_same_grid(*spec.grid, U_min.grid(), "threshold_experiment");
  require(eta_below >= 0.0 && eta_below < 1.0 && eta_above > 1.0, ErrorCode::InvalidArgument,
          "threshold_experiment needs 0 <= eta_below < 1 < eta_above");
  require(distance(u_other, U_min) > 1e-8, ErrorCode::InvalidArgument,
          "threshold_experiment needs a second solution distinct from U_min");
  const ScalarField below = build_threshold_datum(U_min, u_other, eta_below);
  const ScalarField above = build_threshold_datum(U_min, u_other, eta_above);
  auto [b, a] = run_pair(spec, below, above, cfg, opts.concurrent);
  ThresholdVerdict out{std::move(b), std::move(a), std::nullopt, false, false};
  if (out.below_run.final_field) out.limit_distance = distance(*out.below_run.final_field, U_min);
  out.below_as_expected = out.below_run.verdict == Verdict::ConvergedToSteady && out.limit_distance &&
                          *out.limit_distance <= opts.limit_tol;
  out.above_as_expected = out.above_run.verdict == Verdict::BlowUp;
  return out;
}

ThresholdVerdict homogeneous_threshold(const ProblemSpec& spec_f0, const ScalarField& U, double eta_below,
                                       double eta_above, const EvolutionConfig& cfg,
                                       const ThresholdOptions& opts) {
  require_same_grid(*spec_f0.grid, U.grid(), "homogeneous_threshold");
  require(spec_f0.f.norm_inf() == 0.0, ErrorCode::InvalidArgument, "homogeneous_threshold needs f = 0");
  require(U.max() > 0.0 && U.min() >= -1e-12, ErrorCode::InvalidArgument,
          "homogeneous_threshold needs a nonnegative, nontrivial steady state");
  require(eta_below >= 0.0 && eta_below < 1.0 && eta_above > 1.0, ErrorCode::InvalidArgument,
          "homogeneous_threshold needs 0 <= eta_below < 1 < eta_above");
  const ScalarField below(U.grid_ptr(), Eigen::VectorXd(eta_below * U.vec()));
  const ScalarField above(U.grid_ptr(), Eigen::VectorXd(eta_above * U.vec()));
  auto [b, a] = run_pair(spec_f0, below, above, cfg, opts.concurrent);
  ThresholdVerdict out{std::move(b), std::move(a), std::nullopt, false, false};
  if (out.below_run.final_field) out.limit_distance = out.below_run.final_field->norm_inf();
  out.below_as_expected = out.below_run.verdict == Verdict::ConvergedToSteady && out.limit_distance &&
                          *out.limit_distance <= opts.limit_tol;
  out.above_as_expected = out.above_run.verdict == Verdict::BlowUp;
  return out;
}

BoundednessResult boundedness_probe(const ProblemSpec& spec, const ScalarField& u0, const EvolutionConfig& cfg) {
  EnergyTrace trace = evolve(spec, u0, cfg);
  const double floor = energy_floor(spec);
  double sup = 0.0;
  bool crossed = false;
  for (const auto& s : trace.samples) {
    sup = std::max(sup, s.max_u);
    if (s.E < floor) crossed = true;
  }
  const bool blew = trace.verdict == Verdict::BlowUp;
  const double bound = blew ? std::numeric_limits<double>::infinity() : sup;
  return {bound, floor, crossed, !crossed || blew, std::move(trace)};
}

}  // namespace robinlab
