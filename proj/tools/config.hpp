#pragma once

// Flat INI-style experiment configuration with a fixed schema. Every key has a
// default; file values and command-line overrides replace them in that order.

#include <json.hpp>

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace robinlab::cli {

/// Configuration problem reported to the user with exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ValueType { Real, Integer, Boolean, Text, RealList };

struct SchemaEntry {
  const char* section;
  const char* key;
  ValueType type;
  const char* fallback;
  const char* help;
};

const std::vector<SchemaEntry>& schema();

class Config {
 public:
  Config();

  /// Reads `[section]` headers and `key = value` lines; `#` starts a comment.
  void load_file(const std::string& path);
  /// Applies `section.key=value`.
  void apply_override(const std::string& assignment);
  void set(const std::string& field, const std::string& value, const std::string& origin);

  /// Type-checks every value; throws ConfigError naming the field and its origin.
  void validate() const;

  double real(const std::string& field) const;
  long integer(const std::string& field) const;
  bool boolean(const std::string& field) const;
  const std::string& text(const std::string& field) const;
  std::vector<double> reals(const std::string& field) const;

  /// Every field with its typed value, grouped by section.
  nlohmann::json effective() const;

 private:
  struct Value {
    std::string raw;
    std::string origin;
    ValueType type;
  };
  const Value& lookup(const std::string& field) const;
  [[noreturn]] void bad_value(const std::string& field, const Value& v, const std::string& expected) const;

  std::map<std::string, Value> values_;
  std::vector<std::string> order_;
};

}  // namespace robinlab::cli
