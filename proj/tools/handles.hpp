#pragma once

// Owning wrappers around the C API handles.

#include "robinlab/robinlab.h"

#include <json.hpp>

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace robinlab::cli {

/// A non-OK status returned by the library.
class ApiError : public std::runtime_error {
 public:
  ApiError(rl_status status, const std::string& what) : std::runtime_error(what), status_(status) {}
  rl_status status() const noexcept { return status_; }

 private:
  rl_status status_;
};

inline void check(rl_status status, const char* call) {
  if (status != RL_OK)
    throw ApiError(status, std::string(call) + ": " + rl_status_name(status) + ": " + rl_last_error());
}

template <class T, void (*Free)(T*)>
struct Release {
  void operator()(T* p) const { Free(p); }
};

using GridHandle = std::unique_ptr<rl_grid, Release<rl_grid, rl_grid_free>>;
using FieldHandle = std::unique_ptr<rl_field, Release<rl_field, rl_field_free>>;
using ProblemHandle = std::unique_ptr<rl_problem, Release<rl_problem, rl_problem_free>>;
using TorsionHandle = std::unique_ptr<rl_torsion, Release<rl_torsion, rl_torsion_free>>;
using SolveHandle = std::unique_ptr<rl_solve, Release<rl_solve, rl_solve_free>>;
using BetaStarHandle = std::unique_ptr<rl_beta_star, Release<rl_beta_star, rl_beta_star_free>>;
using EigenHandle = std::unique_ptr<rl_eigen, Release<rl_eigen, rl_eigen_free>>;
using PassHandle = std::unique_ptr<rl_pass, Release<rl_pass, rl_pass_free>>;
using TraceHandle = std::unique_ptr<rl_trace, Release<rl_trace, rl_trace_free>>;
using ThresholdHandle = std::unique_ptr<rl_threshold, Release<rl_threshold, rl_threshold_free>>;

/// Parses and frees a JSON string produced by the library.
inline nlohmann::json take_json(char* s) {
  std::unique_ptr<char, Release<char, rl_string_free>> owned(s);
  return nlohmann::json::parse(owned.get());
}

inline std::vector<double> values_of(const rl_field* f) {
  std::vector<double> v(rl_field_size(f));
  rl_field_values(f, v.data(), v.size());
  return v;
}

}  // namespace robinlab::cli
