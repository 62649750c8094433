#pragma once
// Problem/task configuration. Two on-disk syntaxes are accepted
// interchangeably:
//
//   * a sectioned text format ("[interval]", "[potential]", repeatable
//     "[interaction]", "[task]", ...), and
//   * a JSON document with the same field names.
//
// Both parse into the same RunConfig, and `config_to_json` re-emits the
// canonical JSON form. Reports embed that echo, so any report can be re-run
// bit-identically from its own "config" block.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include "slpi/model.hpp"
#include "slpi/serialize.hpp"

namespace slpi {

/// Parse or semantic error in a configuration; message carries file/line or
/// field diagnostics.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputSpec {
  std::string path;             ///< empty = derive from task name
  std::string format = "json";  ///< "json" or "csv"
};

struct RunConfig {
  Problem problem;
  bool halfline = false;  ///< interval.b was "inf"; only `truncate` accepts this
  CouplingVector coupling;
  bool has_coupling = false;
  EnsembleSpec ensemble;
  bool has_ensemble = false;
  Tolerances tolerances = Tolerances::defaults();
  std::string task;        ///< task name; may be empty (CLI subcommand supplies it)
  Json task_params = Json::object();  ///< numbers/strings/arrays, canonical
  OutputSpec output;

  // typed access to task_params with field-named diagnostics
  double param_number(const std::string& key) const;
  double param_number(const std::string& key, double fallback) const;
  long param_integer(const std::string& key, long fallback) const;
  std::string param_string(const std::string& key, const std::string& fallback) const;
  std::vector<double> param_list(const std::string& key) const;
  bool has_param(const std::string& key) const { return task_params.contains(key); }
};

/// Load a config file; JSON is detected by a leading '{'.
RunConfig load_config(const std::string& path);

/// Parse configuration text (either syntax). `origin` names the source in
/// diagnostics.
RunConfig parse_config_text(const std::string& text, const std::string& origin);

/// Canonical JSON echo of a RunConfig (round-trips through config_from_json).
Json config_to_json(const RunConfig&);
RunConfig config_from_json(const Json&);

}  // namespace slpi
