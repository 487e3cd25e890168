#include "commands.hpp"

#include "handles.hpp"
#include "source_expr.hpp"
#include "svg_plot.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <random>
#include <regex>
#include <thread>

namespace robinlab::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::string> kCommands = {"torsion", "solve",     "beta-star", "eigen",
                                            "second",  "evolve",    "threshold", "suite"};

int exit_code_for(rl_status status) {
  switch (status) {
    case RL_INVALID_ARGUMENT:
    case RL_GRID_MISMATCH: return kConfig;
    case RL_INVALID_BRACKET:
    case RL_NON_MONOTONE_VERDICT:
    case RL_SINGULAR_JACOBIAN:
    case RL_STAGNATION:
    case RL_PRECONDITION_VIOLATED:
    case RL_PASS_NOT_FOUND:
    case RL_STIFFNESS_FAILURE: return kInconclusive;
    default: return kInternal;
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << text;
}

struct MinimalSolution {
  rl_solve_status status;
  json report;
  FieldHandle U;
};

struct SecondSolution {
  json report;
  FieldHandle u2;
  PassHandle pass;
};

/// Grid, source and problem built from one configuration, with the derived
/// quantities computed on first use.
class Experiment {
 public:
  Experiment(const Config& cfg, fs::path out) : cfg_(cfg), out_(std::move(out)) {
    effective_ = cfg_.effective();
    build_grid();
    build_source();
    fs::create_directories(out_);
  }

  const Config& config() const { return cfg_; }
  const rl_grid* grid() const { return grid_.get(); }
  const rl_field* source() const { return f_.get(); }
  bool source_is_zero() const { return source_zero_; }
  double p() const { return cfg_.real("problem.p"); }
  int dimension() const { return rl_grid_dimension(grid_.get()); }
  fs::path file(const std::string& name) const { return out_ / name; }

  json effective() const { return effective_; }

  void write_json(const std::string& name, json payload) const {
    payload["effective_config"] = effective_;
    write_text(file(name), payload.dump(2) + "\n");
  }

  void write_field(const std::string& name, const rl_field* field) const {
    check(rl_field_write_csv(field, file(name).string().c_str()), "rl_field_write_csv");
  }

  rl_monotone_options monotone_options() const {
    rl_monotone_options o;
    rl_monotone_options_default(&o);
    o.tol_increment = cfg_.real("solve.tol_increment");
    o.tol_residual = cfg_.real("solve.tol_residual");
    o.divergence_cap = cfg_.real("solve.divergence_cap");
    o.max_iter = static_cast<int>(cfg_.integer("solve.max_iter"));
    return o;
  }

  rl_newton_options newton_options() const {
    rl_newton_options o;
    rl_newton_options_default(&o);
    o.tol = cfg_.real("newton.tol");
    o.max_iter = static_cast<int>(cfg_.integer("newton.max_iter"));
    o.cone_slack = cfg_.real("newton.cone_slack");
    return o;
  }

  BetaStarHandle find_beta_star() const {
    const auto opts = monotone_options();
    rl_beta_star* out = nullptr;
    check(rl_find_beta_star(grid_.get(), p(), f_.get(), cfg_.real("beta_star.lo"), cfg_.real("beta_star.hi"),
                            cfg_.real("beta_star.tol"), static_cast<int>(cfg_.integer("beta_star.sweep_points")),
                            &opts, &out),
          "rl_find_beta_star");
    return BetaStarHandle(out);
  }

  double beta() {
    if (!beta_) resolve_beta();
    return *beta_;
  }

  const rl_problem* problem() {
    if (!problem_) {
      rl_problem* out = nullptr;
      check(rl_problem_create(grid_.get(), p(), beta(), f_.get(), &out), "rl_problem_create");
      problem_.reset(out);
    }
    return problem_.get();
  }

  MinimalSolution& minimal() {
    if (minimal_) return *minimal_;
    const auto opts = monotone_options();
    rl_solve* raw = nullptr;
    check(rl_monotone_iterate(problem(), &opts, &raw), "rl_monotone_iterate");
    SolveHandle mono(raw);
    char* js = nullptr;
    check(rl_solve_to_json(mono.get(), &js), "rl_solve_to_json");
    MinimalSolution m{rl_solve_status_of(mono.get()), take_json(js), nullptr};
    if (m.status == RL_CONVERGED) {
      rl_field* U = nullptr;
      check(rl_solve_solution(mono.get(), &U), "rl_solve_solution");
      m.U.reset(U);
      if (cfg_.boolean("solve.polish")) {
        const auto nopt = newton_options();
        rl_solve* pol = nullptr;
        check(rl_newton_refine(problem(), m.U.get(), &nopt, &pol), "rl_newton_refine");
        SolveHandle polished(pol);
        check(rl_solve_to_json(polished.get(), &js), "rl_solve_to_json");
        m.report["polish"] = take_json(js);
        if (rl_solve_status_of(polished.get()) == RL_CONVERGED) {
          check(rl_solve_solution(polished.get(), &U), "rl_solve_solution");
          m.U.reset(U);
        }
      }
    }
    minimal_ = std::move(m);
    return *minimal_;
  }

  /// Requires a converged minimal solution.
  SecondSolution& second() {
    if (second_) return *second_;
    auto& m = minimal();
    rl_pass* raw = nullptr;
    check(rl_mountain_pass(problem(), m.U.get(), &raw), "rl_mountain_pass");
    SecondSolution s{json{}, nullptr, PassHandle(raw)};
    char* js = nullptr;
    check(rl_pass_to_json(s.pass.get(), &js), "rl_pass_to_json");
    s.report = take_json(js);
    rl_field* u2 = nullptr;
    check(rl_pass_solution(s.pass.get(), &u2), "rl_pass_solution");
    s.u2.reset(u2);
    second_ = std::move(s);
    return *second_;
  }

  FieldHandle field(const std::vector<double>& values) const {
    rl_field* out = nullptr;
    check(rl_field_from_values(grid_.get(), values.data(), values.size(), &out), "rl_field_from_values");
    return FieldHandle(out);
  }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }

 private:
  void build_grid() {
    const std::string kind = cfg_.text("domain.kind");
    const auto b = cfg_.reals("domain.bounds");
    const long n = cfg_.integer("domain.n");
    if (n < 4 || n > 100000) throw ConfigError("field domain.n: cells per axis must lie in [4, 100000]");
    rl_grid* g = nullptr;
    rl_status s;
    if (kind == "interval") {
      if (b.size() != 2) throw ConfigError("field domain.bounds: an interval needs two values a b");
      s = rl_grid_interval(b[0], b[1], static_cast<int>(n), &g);
    } else if (kind == "rectangle") {
      if (b.size() != 4) throw ConfigError("field domain.bounds: a rectangle needs four values ax bx ay by");
      s = rl_grid_rectangle(b[0], b[1], b[2], b[3], static_cast<int>(n), &g);
    } else {
      throw ConfigError("field domain.kind: expected interval or rectangle, got '" + kind + "'");
    }
    if (s != RL_OK) throw ConfigError(std::string("field domain: ") + rl_last_error());
    grid_.reset(g);
    const std::size_t count = rl_grid_node_count(g);
    xs_.resize(count);
    ys_.resize(count);
    for (std::size_t i = 0; i < count; ++i) check(rl_grid_coord(g, i, &xs_[i], &ys_[i]), "rl_grid_coord");
  }

  void build_source() {
    SourceExpr expr;
    try {
      expr = SourceExpr::parse(cfg_.text("problem.f"), dimension());
    } catch (const ExpressionError& e) {
      throw ConfigError(std::string("field problem.f: ") + e.what());
    }
    if (expr.uses(Term::Kind::Minimal) || expr.uses(Term::Kind::Second) || expr.uses(Term::Kind::Datum))
      throw ConfigError("field problem.f: the source cannot refer to solutions");
    const auto values = expr.evaluate(xs_, ys_);
    rl_field* f = nullptr;
    if (rl_field_from_values(grid_.get(), values.data(), values.size(), &f) != RL_OK)
      throw ConfigError(std::string("field problem.f: ") + rl_last_error());
    f_.reset(f);
    source_zero_ = std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
  }

  void resolve_beta() {
    static const std::regex star(R"(^\s*(?:([-+0-9.eE]+)\s*\*\s*)?star\s*(?:/\s*([-+0-9.eE]+))?\s*$)");
    const std::string& text = cfg_.text("problem.beta");
    std::smatch m;
    double value;
    if (std::regex_match(text, m, star)) {
      double factor = 1.0;
      try {
        if (m[1].matched) factor *= std::stod(m[1].str());
        if (m[2].matched) factor /= std::stod(m[2].str());
      } catch (const std::exception&) {
        throw ConfigError("field problem.beta: malformed factor in '" + text + "'");
      }
      auto bs = find_beta_star();
      double lo = 0, hi = 0;
      check(rl_beta_star_bracket(bs.get(), &lo, &hi), "rl_beta_star_bracket");
      effective_["problem"]["beta_star_bracket"] = {lo, hi};
      value = factor * hi;
    } else {
      std::size_t used = 0;
      try {
        value = std::stod(text, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || text.find_first_not_of(" \t", used) != std::string::npos)
        throw ConfigError("field problem.beta: expected a number, star, k*star or star/k, got '" + text + "'");
    }
    if (!(value >= 0.0) || !std::isfinite(value))
      throw ConfigError("field problem.beta: resolved value must be finite and >= 0");
    beta_ = value;
    effective_["problem"]["beta_value"] = value;
  }

  const Config& cfg_;
  fs::path out_;
  json effective_;
  GridHandle grid_;
  FieldHandle f_;
  bool source_zero_ = false;
  std::vector<double> xs_, ys_;
  std::optional<double> beta_;
  ProblemHandle problem_;
  std::optional<MinimalSolution> minimal_;
  std::optional<SecondSolution> second_;
};

int solve_status_code(rl_solve_status s) {
  switch (s) {
    case RL_CONVERGED: return kOk;
    case RL_DIVERGED: return kFinding;
    case RL_MAX_ITER: return kInconclusive;
  }
  return kInternal;
}

/// Writes report.json and returns nonzero unless the minimal solution exists.
int require_minimal(Experiment& ex) {
  auto& m = ex.minimal();
  if (m.status == RL_CONVERGED) return kOk;
  ex.write_json("report.json", m.report);
  std::cerr << "robinlab: monotone iteration " << m.report.at("status").get<std::string>()
            << "; no minimal solution at beta = " << ex.beta() << "\n";
  return solve_status_code(m.status);
}

// --- commands ------------------------------------------------------------------

int cmd_torsion(Experiment& ex) {
  rl_torsion* raw = nullptr;
  check(rl_torsion_report(ex.grid(), ex.p(), ex.beta(), &raw), "rl_torsion_report");
  TorsionHandle t(raw);
  rl_field* h = nullptr;
  check(rl_torsion_h(t.get(), &h), "rl_torsion_h");
  FieldHandle hh(h);
  rl_field* phi = nullptr;
  check(rl_torsion_phi_beta(t.get(), &phi), "rl_torsion_phi_beta");
  FieldHandle ph(phi);
  ex.write_field("h.csv", hh.get());
  ex.write_field("phi_beta.csv", ph.get());
  char* js = nullptr;
  check(rl_torsion_to_json(t.get(), &js), "rl_torsion_to_json");
  json out = take_json(js);
  int admissible = 0;
  check(rl_condition_f(ex.problem(), t.get(), &admissible, &js), "rl_condition_f");
  out["condition_F"] = take_json(js);
  ex.write_json("constants.json", out);
  return kOk;
}

int cmd_solve(Experiment& ex) {
  auto& m = ex.minimal();
  if (m.U) ex.write_field("U_beta.csv", m.U.get());
  ex.write_json("report.json", m.report);
  return solve_status_code(m.status);
}

int cmd_beta_star(Experiment& ex) {
  auto bs = ex.find_beta_star();
  char* js = nullptr;
  check(rl_beta_star_to_json(bs.get(), &js), "rl_beta_star_to_json");
  ex.write_json("beta_star.json", take_json(js));
  return kOk;
}

int cmd_eigen(Experiment& ex) {
  if (int rc = require_minimal(ex)) return rc;
  rl_eigen* raw = nullptr;
  check(rl_linearized_eigen(ex.problem(), ex.minimal().U.get(), &raw), "rl_linearized_eigen");
  EigenHandle e(raw);
  rl_field* phi = nullptr;
  check(rl_eigen_phi1(e.get(), &phi), "rl_eigen_phi1");
  FieldHandle ph(phi);
  ex.write_field("phi1.csv", ph.get());
  char* js = nullptr;
  check(rl_eigen_to_json(e.get(), &js), "rl_eigen_to_json");
  ex.write_json("eigen.json", take_json(js));
  return kOk;
}

int cmd_second(Experiment& ex) {
  if (int rc = require_minimal(ex)) return rc;
  auto& s = ex.second();
  ex.write_field("U_beta.csv", ex.minimal().U.get());
  ex.write_field("u2.csv", s.u2.get());
  check(rl_pass_write_history_csv(s.pass.get(), ex.file("pass_history.csv").string().c_str()),
        "rl_pass_write_history_csv");
  ex.write_json("second.json", s.report);
  return solve_status_code(rl_pass_status(s.pass.get()));
}

rl_evolution_config evolution_config(const Config& cfg, std::vector<double>& snapshot_storage) {
  rl_evolution_config c;
  rl_evolution_config_default(&c);
  c.dt0 = cfg.real("evolve.dt0");
  c.t_end = cfg.real("evolve.t_end");
  c.blowup_cap = cfg.real("evolve.blowup_cap");
  c.dt_min = cfg.real("evolve.dt_min");
  c.steady_tol = cfg.real("evolve.steady_tol");
  c.growth_limit = cfg.real("evolve.growth_limit");
  c.increment_limit = cfg.real("evolve.increment_limit");
  c.quiet_steps = static_cast<int>(cfg.integer("evolve.quiet_steps"));
  c.sample_stride = static_cast<int>(cfg.integer("evolve.sample_stride"));
  c.diffusion = cfg.boolean("evolve.diffusion") ? 1 : 0;
  snapshot_storage = cfg.reals("evolve.snapshots");
  c.snapshot_times = snapshot_storage.data();
  c.snapshot_count = snapshot_storage.size();
  return c;
}

std::vector<rl_trace_sample> samples_of(const rl_trace* t) {
  std::vector<rl_trace_sample> out(rl_trace_sample_count(t));
  for (std::size_t k = 0; k < out.size(); ++k) check(rl_trace_sample_at(t, k, &out[k]), "rl_trace_sample_at");
  return out;
}

void add_trace_series(std::vector<Panel>& panels, const rl_trace* t, const std::string& label) {
  Series m{label, {}, {}}, e{label, {}, {}};
  for (const auto& s : samples_of(t)) {
    m.x.push_back(s.t);
    m.y.push_back(s.max_u);
    e.x.push_back(s.t);
    e.y.push_back(s.E);
  }
  panels[0].series.push_back(std::move(m));
  panels[1].series.push_back(std::move(e));
}

std::vector<Panel> trace_panels() {
  return {{"max u over time", "t", "max u", {}, true}, {"energy over time", "t", "E", {}, false}};
}

json write_snapshots(const Experiment& ex, const rl_trace* t, const std::string& dir) {
  json list = json::array();
  const std::size_t count = rl_trace_snapshot_count(t);
  if (count == 0) return list;
  fs::create_directories(ex.file(dir));
  for (std::size_t k = 0; k < count; ++k) {
    double time = 0;
    rl_field* raw = nullptr;
    check(rl_trace_snapshot(t, k, &time, &raw), "rl_trace_snapshot");
    FieldHandle f(raw);
    const std::string name = dir + "/snapshot_" + std::to_string(k) + ".csv";
    ex.write_field(name, f.get());
    list.push_back({{"t", time}, {"file", name}});
  }
  return list;
}

FieldHandle initial_datum(Experiment& ex) {
  SourceExpr expr;
  try {
    expr = SourceExpr::parse(ex.config().text("evolve.u0"), ex.dimension());
  } catch (const ExpressionError& e) {
    throw ConfigError(std::string("field evolve.u0: ") + e.what());
  }
  NamedFields named;
  std::vector<double> U, u2;
  const bool needs_second = expr.uses(Term::Kind::Second) || expr.uses(Term::Kind::Datum);
  if (expr.uses(Term::Kind::Minimal) || needs_second) {
    if (ex.minimal().status != RL_CONVERGED)
      throw ConfigError("field evolve.u0: refers to the minimal solution, which does not exist at this beta");
    U = values_of(ex.minimal().U.get());
    named.minimal = &U;
  }
  if (needs_second) {
    u2 = values_of(ex.second().u2.get());
    named.second = &u2;
    named.datum = [&ex](double eta) {
      rl_field* d = nullptr;
      check(rl_build_threshold_datum(ex.minimal().U.get(), ex.second().u2.get(), eta, &d),
            "rl_build_threshold_datum");
      FieldHandle owned(d);
      return values_of(owned.get());
    };
  }
  return ex.field(expr.evaluate(ex.xs(), ex.ys(), named));
}

int cmd_evolve(Experiment& ex) {
  FieldHandle u0 = initial_datum(ex);
  std::vector<double> snaps;
  const auto cfg = evolution_config(ex.config(), snaps);
  char* js = nullptr;
  rl_trace* raw = nullptr;
  check(rl_boundedness_probe(ex.problem(), u0.get(), &cfg, &js, &raw), "rl_boundedness_probe");
  TraceHandle trace(raw);
  json out = take_json(js);
  check(rl_trace_write_csv(trace.get(), ex.file("trace.csv").string().c_str()), "rl_trace_write_csv");
  out["snapshots"] = write_snapshots(ex, trace.get(), "snapshots");
  rl_field* last = nullptr;
  if (rl_trace_final_field(trace.get(), &last) == RL_OK) {
    FieldHandle f(last);
    ex.write_field("final.csv", f.get());
  }
  ex.write_json("verdict.json", out);
  if (ex.config().boolean("run.plot")) {
    auto panels = trace_panels();
    add_trace_series(panels, trace.get(), "u");
    write_svg(ex.file("plot.svg").string(), panels);
  }
  return rl_trace_verdict(trace.get()) == RL_BLOW_UP ? kFinding : kOk;
}

int cmd_threshold(Experiment& ex) {
  if (int rc = require_minimal(ex)) return rc;
  std::vector<double> snaps;
  const auto cfg = evolution_config(ex.config(), snaps);
  const double eb = ex.config().real("threshold.eta_below");
  const double ea = ex.config().real("threshold.eta_above");
  auto& s = ex.second();
  rl_threshold* raw = nullptr;
  if (ex.source_is_zero()) {
    check(rl_homogeneous_threshold(ex.problem(), s.u2.get(), eb, ea, &cfg, &raw), "rl_homogeneous_threshold");
  } else {
    check(rl_threshold_experiment(ex.problem(), ex.minimal().U.get(), s.u2.get(), eb, ea, &cfg, &raw),
          "rl_threshold_experiment");
  }
  ThresholdHandle verdict(raw);
  ex.write_field("U_beta.csv", ex.minimal().U.get());
  ex.write_field("u2.csv", s.u2.get());
  char* js = nullptr;
  check(rl_threshold_to_json(verdict.get(), &js), "rl_threshold_to_json");
  json out = take_json(js);
  out["mode"] = ex.source_is_zero() ? "homogeneous" : "ordered_pair";
  out["eta_below"] = eb;
  out["eta_above"] = ea;
  const std::pair<const char*, const rl_trace*> runs[] = {{"below", rl_threshold_below(verdict.get())},
                                                          {"above", rl_threshold_above(verdict.get())}};
  auto panels = trace_panels();
  for (const auto& [name, trace] : runs) {
    fs::create_directories(ex.file(name));
    check(rl_trace_write_csv(trace, ex.file(std::string(name) + "/trace.csv").string().c_str()),
          "rl_trace_write_csv");
    out[name]["snapshots"] = write_snapshots(ex, trace, std::string(name) + "/snapshots");
    const double eta = std::string(name) == "below" ? eb : ea;
    add_trace_series(panels, trace, std::string(name) + " eta=" + json(eta).dump());
  }
  ex.write_json("verdict.json", out);
  if (ex.config().boolean("run.plot")) write_svg(ex.file("plot.svg").string(), panels);
  return rl_threshold_as_expected(verdict.get()) ? kOk : kInconclusive;
}

/// Randomized admissible sources: the monotone iterates never decrease, and the
/// limit stays below Λφ_β whenever that field is a discrete super-solution.
int cmd_property(Experiment& ex) {
  const long instances = ex.config().integer("suite.property_instances");
  std::mt19937_64 rng(static_cast<std::uint64_t>(ex.config().integer("run.seed")));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double beta = ex.config().real("suite.property_beta");
  rl_torsion* raw = nullptr;
  check(rl_torsion_report(ex.grid(), ex.p(), beta, &raw), "rl_torsion_report");
  TorsionHandle t(raw);
  double M = 0, Lambda = 0, gap = 0, F = 0;
  check(rl_torsion_constants(t.get(), &M, &Lambda, &gap, &F), "rl_torsion_constants");
  rl_field* phi = nullptr;
  check(rl_torsion_phi_beta(t.get(), &phi), "rl_torsion_phi_beta");
  FieldHandle ph(phi);
  rl_field* sup = nullptr;
  check(rl_field_scaled(ph.get(), Lambda, &sup), "rl_field_scaled");
  FieldHandle super(sup);
  const auto super_values = values_of(super.get());

  const double xlo = *std::min_element(ex.xs().begin(), ex.xs().end());
  const double xhi = *std::max_element(ex.xs().begin(), ex.xs().end());
  const double ylo = *std::min_element(ex.ys().begin(), ex.ys().end());
  const double yhi = *std::max_element(ex.ys().begin(), ex.ys().end());
  const double span = std::max(xhi - xlo, yhi - ylo);

  json list = json::array();
  long violations = 0, bound_checked = 0, bound_failures = 0;
  for (long k = 0; k < instances; ++k) {
    std::vector<double> f(ex.xs().size(), 0.0);
    for (int b = 0; b < 3; ++b) {
      const double cx = xlo + unit(rng) * (xhi - xlo);
      const double cy = ylo + unit(rng) * (yhi - ylo);
      const double w = (0.15 + 0.5 * unit(rng)) * span;
      const double h = 0.2 + unit(rng);
      for (std::size_t i = 0; i < f.size(); ++i) {
        const double dx = ex.xs()[i] - cx, dy = ex.dimension() == 2 ? ex.ys()[i] - cy : 0.0;
        const double r2 = (dx * dx + dy * dy) / (w * w);
        if (r2 < 1.0) f[i] += h * std::exp(1.0 - 1.0 / (1.0 - r2));
      }
    }
    const double peak = *std::max_element(f.begin(), f.end());
    const double fraction = 0.05 + 0.9 * unit(rng);
    if (peak > 0)
      for (auto& v : f) v *= fraction * F / peak;
    FieldHandle source = ex.field(f);
    rl_problem* pr = nullptr;
    check(rl_problem_create(ex.grid(), ex.p(), beta, source.get(), &pr), "rl_problem_create");
    ProblemHandle problem(pr);
    const auto opts = ex.monotone_options();
    rl_solve* sr = nullptr;
    check(rl_monotone_iterate(problem.get(), &opts, &sr), "rl_monotone_iterate");
    SolveHandle solve(sr);
    char* js = nullptr;
    check(rl_solve_to_json(solve.get(), &js), "rl_solve_to_json");
    const json report = take_json(js);
    const long v = report.at("monotone_violations").get<long>();
    violations += v;

    rl_field* res = nullptr;
    check(rl_stationary_residual(problem.get(), super.get(), &res), "rl_stationary_residual");
    FieldHandle residual(res);
    const bool is_super = rl_field_min(residual.get()) >= -1e-10;
    json entry{{"instance", k},
               {"f_max", fraction * F},
               {"status", report.at("status")},
               {"iterations", report.at("iterations")},
               {"monotone_violations", v},
               {"super_solution", is_super}};
    if (is_super && rl_solve_status_of(solve.get()) == RL_CONVERGED) {
      rl_field* U = nullptr;
      check(rl_solve_solution(solve.get(), &U), "rl_solve_solution");
      FieldHandle Uh(U);
      const auto u = values_of(Uh.get());
      double excess = -INFINITY;
      for (std::size_t i = 0; i < u.size(); ++i) excess = std::max(excess, u[i] - super_values[i]);
      ++bound_checked;
      if (excess > 1e-10) ++bound_failures;
      entry["max_excess_over_bound"] = excess;
    }
    list.push_back(std::move(entry));
  }
  ex.write_json("property.json", {{"beta", beta},
                                  {"F_bound", F},
                                  {"Lambda", Lambda},
                                  {"instances", list},
                                  {"monotone_violations", violations},
                                  {"bound_checked", bound_checked},
                                  {"bound_failures", bound_failures}});
  return violations == 0 && bound_failures == 0 ? kOk : kInconclusive;
}

std::vector<std::string> listing(const fs::path& dir) {
  std::vector<std::string> files;
  if (!fs::exists(dir)) return files;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(fs::relative(e.path(), dir).generic_string());
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<std::string> split_words(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ' ' || c == ',' || c == '\t') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

int cmd_suite(const Config& cfg, const fs::path& out) {
  const auto items = split_words(cfg.text("suite.commands"));
  if (items.empty()) throw ConfigError("field suite.commands: empty");
  for (const auto& item : items)
    if (item == "suite" || (item != "property" && std::find(kCommands.begin(), kCommands.end(), item) == kCommands.end()))
      throw ConfigError("field suite.commands: unknown command '" + item + "'");
  const long workers = cfg.integer("run.workers");
  if (workers < 1) throw ConfigError("field run.workers: must be at least 1");
  fs::create_directories(out);

  std::vector<int> codes(items.size(), kInternal);
  std::atomic<std::size_t> next{0};
  std::mutex log;
  auto worker = [&] {
    for (std::size_t k = next++; k < items.size(); k = next++) {
      const int rc = run_reporting(items[k], cfg, out / items[k]);
      codes[k] = rc;
      std::lock_guard<std::mutex> lock(log);
      std::cerr << "suite: " << items[k] << " exited with " << rc << "\n";
    }
  };
  std::vector<std::thread> pool;
  const auto count = static_cast<std::size_t>(std::min<long>(workers, static_cast<long>(items.size())));
  for (std::size_t i = 0; i < count; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  json runs = json::array();
  int worst = kOk;
  for (std::size_t k = 0; k < items.size(); ++k) {
    runs.push_back({{"command", items[k]}, {"exit_code", codes[k]}, {"directory", items[k]},
                    {"files", listing(out / items[k])}});
    if (codes[k] == kInternal || codes[k] == kConfig) worst = kInternal;
    else if (codes[k] == kInconclusive && worst == kOk) worst = kInconclusive;
  }
  json index{{"runs", runs}, {"effective_config", cfg.effective()}};
  write_text(out / "index.json", index.dump(2) + "\n");
  return worst;
}

}  // namespace

const std::vector<std::string>& command_names() { return kCommands; }

int run_command(const std::string& command, const Config& cfg, const fs::path& out) {
  cfg.validate();
  if (command == "suite") return cmd_suite(cfg, out);
  Experiment ex(cfg, out);
  if (command == "torsion") return cmd_torsion(ex);
  if (command == "solve") return cmd_solve(ex);
  if (command == "beta-star") return cmd_beta_star(ex);
  if (command == "eigen") return cmd_eigen(ex);
  if (command == "second") return cmd_second(ex);
  if (command == "evolve") return cmd_evolve(ex);
  if (command == "threshold") return cmd_threshold(ex);
  if (command == "property") return cmd_property(ex);
  throw ConfigError("unknown command '" + command + "'");
}

int run_reporting(const std::string& command, const Config& cfg, const fs::path& out) {
  try {
    return run_command(command, cfg, out);
  } catch (const ConfigError& e) {
    std::cerr << "robinlab " << command << ": config error: " << e.what() << "\n";
    return kConfig;
  } catch (const ApiError& e) {
    std::cerr << "robinlab " << command << ": " << e.what() << "\n";
    return exit_code_for(e.status());
  } catch (const std::exception& e) {
    std::cerr << "robinlab " << command << ": internal error: " << e.what() << "\n";
    return kInternal;
  }
}

}  // namespace robinlab::cli
