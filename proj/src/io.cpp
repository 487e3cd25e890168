#include "robinlab/io.hpp"

#include "robinlab/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace robinlab {

using nlohmann::json;

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  require(os.good(), ErrorCode::Io, "cannot open " + path + " for writing");
  return os;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  require(is.good(), ErrorCode::Io, "cannot open " + path + " for reading");
  return is;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  return out;
}

double parse_real(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  require(end != s.c_str() && *end == '\0', ErrorCode::Io,
          "line " + std::to_string(line) + ": cannot parse '" + s + "' as a number");
  return v;
}

json optional_real(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json real_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

void write_field_csv(std::ostream& os, const ScalarField& field) {
  const Grid& g = field.grid();
  os << (g.dimension() == 1 ? "x,value\n" : "x,y,value\n");
  for (std::size_t i = 0; i < field.size(); ++i) {
    const Point p = g.coord(i);
    os << format_real(p.x) << ',';
    if (g.dimension() == 2) os << format_real(p.y) << ',';
    os << format_real(field[i]) << '\n';
  }
}

ScalarField read_field_csv(std::istream& is, GridPtr grid) {
  require(grid != nullptr, ErrorCode::InvalidArgument, "read_field_csv without a grid");
  const int dim = grid->dimension();
  std::string line;
  require(static_cast<bool>(std::getline(is, line)), ErrorCode::Io, "field CSV is empty");
  const std::string expected = dim == 1 ? "x,value" : "x,y,value";
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == expected, ErrorCode::Io, "field CSV header must be '" + expected + "', got '" + line + "'");
  std::vector<double> values;
  values.reserve(grid->node_count());
  std::size_t lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    require(cells.size() == static_cast<std::size_t>(dim + 1), ErrorCode::Io,
            "line " + std::to_string(lineno) + ": expected " + std::to_string(dim + 1) + " columns");
    const std::size_t node = values.size();
    require(node < grid->node_count(), ErrorCode::Io, "field CSV has more rows than the grid has nodes");
    const Point p = grid->coord(node);
    const double x = parse_real(cells[0], lineno);
    const double tol = 1e-9 * (1.0 + std::abs(p.x) + std::abs(p.y));
    require(std::abs(x - p.x) <= tol, ErrorCode::GridMismatch,
            "line " + std::to_string(lineno) + ": x does not match node " + std::to_string(node));
    if (dim == 2)
      require(std::abs(parse_real(cells[1], lineno) - p.y) <= tol, ErrorCode::GridMismatch,
              "line " + std::to_string(lineno) + ": y does not match node " + std::to_string(node));
    values.push_back(parse_real(cells.back(), lineno));
  }
  require(values.size() == grid->node_count(), ErrorCode::Io,
          "field CSV has " + std::to_string(values.size()) + " rows, grid has " +
              std::to_string(grid->node_count()) + " nodes");
  return ScalarField(std::move(grid), std::move(values));
}

void write_field_csv(const std::string& path, const ScalarField& field) {
  auto os = open_out(path);
  write_field_csv(os, field);
}

ScalarField read_field_csv(const std::string& path, GridPtr grid) {
  auto is = open_in(path);
  return read_field_csv(is, std::move(grid));
}

void write_trace_csv(std::ostream& os, const EnergyTrace& trace) {
  os << "t,dt,max_u,E,dissipation,identity_residual\n";
  for (const auto& s : trace.samples)
    os << format_real(s.t) << ',' << format_real(s.dt) << ',' << format_real(s.max_u) << ',' << format_real(s.E)
       << ',' << format_real(s.dissipation) << ',' << format_real(s.identity_residual) << '\n';
}

void write_trace_csv(const std::string& path, const EnergyTrace& trace) {
  auto os = open_out(path);
  write_trace_csv(os, trace);
}

void write_pass_history_csv(std::ostream& os, const std::vector<PassRecord>& history) {
  os << "iteration,functional,gradient_norm,step,norm_inf\n";
  for (const auto& r : history)
    os << r.iteration << ',' << format_real(r.functional) << ',' << format_real(r.gradient_norm) << ','
       << format_real(r.step) << ',' << format_real(r.norm_inf) << '\n';
}

void write_pass_history_csv(const std::string& path, const std::vector<PassRecord>& history) {
  auto os = open_out(path);
  write_pass_history_csv(os, history);
}

json to_json(const Grid& grid) {
  json j;
  if (const auto* iv = std::get_if<IntervalDomain>(&grid.domain())) {
    j["kind"] = "interval";
    j["bounds"] = {iv->a, iv->b};
  } else {
    const auto& r = std::get<RectangleDomain>(grid.domain());
    j["kind"] = "rectangle";
    j["bounds"] = {r.ax, r.bx, r.ay, r.by};
  }
  j["n_per_axis"] = grid.cells_per_axis();
  j["node_count"] = grid.node_count();
  j["corner_closure"] = "ghost relation applied on both axes";
  return j;
}

json to_json(const SolveReport& report) {
  json hist = json::array();
  for (const auto& h : report.history)
    hist.push_back({{"iter", h.iteration},
                    {"norm_inf", h.norm_inf},
                    {"increment", h.increment},
                    {"residual", real_or_null(h.residual)}});
  return {{"status", to_string(report.status)},
          {"iterations", report.iterations},
          {"residual_inf", real_or_null(report.residual_inf)},
          {"monotone_violations", report.monotone_violations},
          {"has_solution", report.solution.has_value()},
          {"history", std::move(hist)}};
}

json to_json(const BetaStarResult& result) {
  json probes = json::array();
  for (const auto& p : result.probes)
    probes.push_back({{"beta", p.beta}, {"status", to_string(p.status)}, {"iterations", p.iterations}});
  return {{"beta_lo", result.beta_lo},
          {"beta_hi", result.beta_hi},
          {"width", result.width()},
          {"probes", std::move(probes)}};
}

json to_json(const EigenReport& report) {
  return {{"lambda1", report.lambda1}, {"iterations", report.iterations}, {"residual", report.residual}};
}

json to_json(const ConditionF& verdict) {
  json j{{"admissible", verdict.admissible()}, {"verdict", verdict.describe()}, {"bound", verdict.bound}};
  if (verdict.node) {
    j["node"] = *verdict.node;
    j["value"] = verdict.value;
  }
  return j;
}

json to_json(const TorsionReport& report) {
  return {{"p", report.p},         {"beta", report.beta},   {"M_h", report.M_h},
          {"Lambda", report.Lambda}, {"gap", report.gap},   {"F_bound", report.F_bound},
          {"h_max", report.h.max()}, {"phi_beta_max", report.phi_beta.max()}};
}

json to_json(const MountainPassResult& result) {
  json j = to_json(result.report);
  j["lambda1"] = result.lambda1;
  j["endpoint_scale"] = result.endpoint_scale;
  j["descent_iterations"] = result.history.size();
  if (!result.history.empty()) {
    j["pass_level"] = result.history.back().functional;
    j["final_gradient_norm"] = result.history.back().gradient_norm;
  }
  return j;
}

json verdict_json(const EnergyTrace& trace, std::optional<double> limit_distance) {
  json j{{"verdict", to_string(trace.verdict)}, {"steps", trace.steps}, {"rejected_steps", trace.rejected_steps}};
  if (trace.t_detect) j["t_detect"] = *trace.t_detect;
  if (limit_distance) j["limit_distance"] = *limit_distance;
  if (!trace.samples.empty()) {
    j["t_final"] = trace.samples.back().t;
    j["max_u_final"] = trace.samples.back().max_u;
  }
  return j;
}

json to_json(const ThresholdVerdict& verdict) {
  return {{"below", verdict_json(verdict.below_run, verdict.limit_distance)},
          {"above", verdict_json(verdict.above_run)},
          {"limit_distance", optional_real(verdict.limit_distance)},
          {"below_as_expected", verdict.below_as_expected},
          {"above_as_expected", verdict.above_as_expected}};
}

json to_json(const BoundednessResult& result) {
  json j = verdict_json(result.trace);
  j["bound_estimate"] = real_or_null(result.bound_estimate);
  j["energy_floor"] = result.energy_floor;
  j["floor_crossed"] = result.floor_crossed;
  j["floor_implication_holds"] = result.floor_implication_holds;
  return j;
}

}  // namespace robinlab
