#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

namespace robinlab::cli {

namespace {

const std::vector<SchemaEntry> kSchema = {
    {"domain", "kind", ValueType::Text, "interval", "interval or rectangle"},
    {"domain", "bounds", ValueType::RealList, "0 1", "a b, or ax bx ay by for a rectangle"},
    {"domain", "n", ValueType::Integer, "64", "cells per axis"},
    {"problem", "p", ValueType::Real, "2", "exponent of the reaction u^p"},
    {"problem", "beta", ValueType::Text, "4", "Robin coefficient: a number, star, k*star or star/k"},
    {"problem", "f", ValueType::Text, "const 1", "source expression"},
    {"solve", "tol_increment", ValueType::Real, "1e-10", ""},
    {"solve", "tol_residual", ValueType::Real, "1e-8", ""},
    {"solve", "divergence_cap", ValueType::Real, "1e6", ""},
    {"solve", "max_iter", ValueType::Integer, "10000", ""},
    {"solve", "polish", ValueType::Boolean, "true", "Newton polish of the converged iterate"},
    {"newton", "tol", ValueType::Real, "1e-12", ""},
    {"newton", "max_iter", ValueType::Integer, "50", ""},
    {"newton", "cone_slack", ValueType::Real, "1e-10", ""},
    {"beta_star", "lo", ValueType::Real, "0.001", ""},
    {"beta_star", "hi", ValueType::Real, "10", ""},
    {"beta_star", "tol", ValueType::Real, "1e-3", ""},
    {"beta_star", "sweep_points", ValueType::Integer, "16", ""},
    {"evolve", "u0", ValueType::Text, "zero", "initial datum expression"},
    {"evolve", "dt0", ValueType::Real, "1e-3", ""},
    {"evolve", "t_end", ValueType::Real, "0", "0 selects 50 L^2"},
    {"evolve", "blowup_cap", ValueType::Real, "1e6", ""},
    {"evolve", "dt_min", ValueType::Real, "1e-12", ""},
    {"evolve", "steady_tol", ValueType::Real, "1e-9", ""},
    {"evolve", "growth_limit", ValueType::Real, "0.1", ""},
    {"evolve", "increment_limit", ValueType::Real, "0.1", ""},
    {"evolve", "quiet_steps", ValueType::Integer, "20", ""},
    {"evolve", "sample_stride", ValueType::Integer, "1", ""},
    {"evolve", "snapshots", ValueType::RealList, "", "times at which to write the field"},
    {"evolve", "diffusion", ValueType::Boolean, "true", ""},
    {"threshold", "eta_below", ValueType::Real, "0.5", ""},
    {"threshold", "eta_above", ValueType::Real, "1.05", ""},
    {"suite", "commands", ValueType::Text, "torsion solve beta-star eigen second evolve threshold property", ""},
    {"suite", "property_instances", ValueType::Integer, "20", "random sources in the property check"},
    {"suite", "property_beta", ValueType::Real, "100", "Robin coefficient of the property check"},
    {"output", "dir", ValueType::Text, "out", ""},
    {"run", "seed", ValueType::Integer, "0", ""},
    {"run", "workers", ValueType::Integer, "1", ""},
    {"run", "plot", ValueType::Boolean, "false", "write SVG plots"},
};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

bool parse_real(const std::string& s, double& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_integer(const std::string& s, long& out) {
  const std::string t = trim(s);
  if (t.empty()) return false;
  const char* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, out);
  return ec == std::errc() && ptr == end;
}

bool parse_boolean(const std::string& s, bool& out) {
  std::string t = trim(s);
  std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
  if (t == "true" || t == "yes" || t == "on" || t == "1") {
    out = true;
    return true;
  }
  if (t == "false" || t == "no" || t == "off" || t == "0") {
    out = false;
    return true;
  }
  return false;
}

bool parse_list(const std::string& s, std::vector<double>& out) {
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  std::string tok;
  out.clear();
  while (is >> tok) {
    double v;
    if (!parse_real(tok, v)) return false;
    out.push_back(v);
  }
  return true;
}

}  // namespace

const std::vector<SchemaEntry>& schema() { return kSchema; }

Config::Config() {
  for (const auto& e : kSchema) {
    const std::string field = std::string(e.section) + "." + e.key;
    values_[field] = {e.fallback, "default", e.type};
    order_.push_back(field);
  }
}

void Config::set(const std::string& field, const std::string& value, const std::string& origin) {
  auto it = values_.find(field);
  if (it == values_.end()) throw ConfigError(origin + ": unknown field '" + field + "'");
  it->second.raw = trim(value);
  it->second.origin = origin;
}

void Config::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::string line;
  std::string section;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const std::string where = path + ":" + std::to_string(number);
    const auto comment = line.find('#');
    std::string body = trim(comment == std::string::npos ? line : line.substr(0, comment));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      const bool known = std::any_of(kSchema.begin(), kSchema.end(),
                                     [&](const SchemaEntry& e) { return section == e.section; });
      if (!known) throw ConfigError(where + ": unknown section [" + section + "]");
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ConfigError(where + ": expected key = value");
    const std::string key = trim(body.substr(0, eq));
    if (section.empty()) throw ConfigError(where + ": key '" + key + "' appears before any section");
    set(section + "." + key, body.substr(eq + 1), where);
  }
}

void Config::apply_override(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("--set " + assignment + ": expected section.key=value");
  set(trim(assignment.substr(0, eq)), assignment.substr(eq + 1), "--set " + trim(assignment.substr(0, eq)));
}

const Config::Value& Config::lookup(const std::string& field) const {
  auto it = values_.find(field);
  if (it == values_.end()) throw ConfigError("unknown field '" + field + "'");
  return it->second;
}

void Config::bad_value(const std::string& field, const Value& v, const std::string& expected) const {
  throw ConfigError(v.origin + ": field " + field + ": expected " + expected + ", got '" + v.raw + "'");
}

void Config::validate() const {
  for (const auto& field : order_) {
    const Value& v = values_.at(field);
    switch (v.type) {
      case ValueType::Real: real(field); break;
      case ValueType::Integer: integer(field); break;
      case ValueType::Boolean: boolean(field); break;
      case ValueType::RealList: reals(field); break;
      case ValueType::Text: break;
    }
  }
}

double Config::real(const std::string& field) const {
  const Value& v = lookup(field);
  double out;
  if (!parse_real(v.raw, out)) bad_value(field, v, "a real number");
  return out;
}

long Config::integer(const std::string& field) const {
  const Value& v = lookup(field);
  long out;
  if (!parse_integer(v.raw, out)) bad_value(field, v, "an integer");
  return out;
}

bool Config::boolean(const std::string& field) const {
  const Value& v = lookup(field);
  bool out;
  if (!parse_boolean(v.raw, out)) bad_value(field, v, "true or false");
  return out;
}

const std::string& Config::text(const std::string& field) const { return lookup(field).raw; }

std::vector<double> Config::reals(const std::string& field) const {
  const Value& v = lookup(field);
  std::vector<double> out;
  if (!parse_list(v.raw, out)) bad_value(field, v, "a list of real numbers");
  return out;
}

nlohmann::json Config::effective() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& e : kSchema) {
    const std::string field = std::string(e.section) + "." + e.key;
    auto& slot = j[e.section][e.key];
    switch (e.type) {
      case ValueType::Real: slot = real(field); break;
      case ValueType::Integer: slot = integer(field); break;
      case ValueType::Boolean: slot = boolean(field); break;
      case ValueType::Text: slot = text(field); break;
      case ValueType::RealList: slot = reals(field); break;
    }
  }
  return j;
}

}  // namespace robinlab::cli
