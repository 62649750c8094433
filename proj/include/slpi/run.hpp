#pragma once
// Task runner behind the command-line tool. Loads a RunConfig, executes one
// of the named tasks, and writes a report file:
//
//   { "slpi_version", "task", "config" (canonical echo, rerunnable),
//     "result" }
//
// JSON reports are byte-deterministic for a fixed (config, seed); wall-clock
// timing is reported to the caller only, never written into the file. CSV
// output carries the same numeric payload as the JSON result.

#include <cstdint>
#include <optional>
#include <string>

#include "slpi/config.hpp"

namespace slpi {

struct RunOverrides {
  std::optional<std::string> out;     ///< --out
  std::optional<std::string> format;  ///< --format json|csv
  std::optional<std::uint64_t> seed;  ///< --seed, replaces ensemble seed
  int threads = 1;                    ///< --threads
};

struct RunOutcome {
  int exit_code = 0;        ///< 0 ok, 2 config error, 3 computation error
  std::string report_path;  ///< file written ("" if none was produced)
  std::string message;      ///< diagnostic when exit_code != 0
  double wall_seconds = 0.0;
};

/// Execute `rc.task` and write the report. Never throws; failures are mapped
/// to exit codes (2: configuration/validation, 3: computation).
RunOutcome run_config(RunConfig rc, const RunOverrides& ov = {});

/// Convenience: load the config file, optionally override the task name, run.
RunOutcome run_task(const std::string& config_path, const std::string& task_override,
                    const RunOverrides& ov = {});

/// Names of all tasks the runner understands, in CLI order.
const std::vector<std::string>& task_names();

}  // namespace slpi
