#pragma once

// CSV and JSON renderings of fields, reports and traces. Reals are written
// with 17 significant digits so that reading them back is bit-exact.

#include "robinlab/elliptic.hpp"
#include "robinlab/grid.hpp"
#include "robinlab/parabolic.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>

namespace robinlab {

std::string format_real(double v);

/// Header `x,value` or `x,y,value`, one row per node in index order.
void write_field_csv(std::ostream& os, const ScalarField& field);
/// Parses a field written by write_field_csv; coordinates must match the grid.
ScalarField read_field_csv(std::istream& is, GridPtr grid);

void write_field_csv(const std::string& path, const ScalarField& field);
ScalarField read_field_csv(const std::string& path, GridPtr grid);

/// Header `t,dt,max_u,E,dissipation,identity_residual`.
void write_trace_csv(std::ostream& os, const EnergyTrace& trace);
void write_trace_csv(const std::string& path, const EnergyTrace& trace);

/// Header `iteration,functional,gradient_norm,step,norm_inf`.
void write_pass_history_csv(std::ostream& os, const std::vector<PassRecord>& history);
void write_pass_history_csv(const std::string& path, const std::vector<PassRecord>& history);

nlohmann::json to_json(const Grid& grid);
nlohmann::json to_json(const SolveReport& report);
nlohmann::json to_json(const BetaStarResult& result);
nlohmann::json to_json(const EigenReport& report);
nlohmann::json to_json(const TorsionReport& report);
nlohmann::json to_json(const ConditionF& verdict);
nlohmann::json to_json(const MountainPassResult& result);
/// {verdict, t_detect?, limit_distance?} plus step counts.
nlohmann::json verdict_json(const EnergyTrace& trace, std::optional<double> limit_distance = std::nullopt);
nlohmann::json to_json(const ThresholdVerdict& verdict);
nlohmann::json to_json(const BoundednessResult& result);

}  // namespace robinlab
