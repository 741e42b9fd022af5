#pragma once

// Run configuration, the single versioned report schema shared by every
// command, and the command implementations behind the CLI.
//
// Exit codes: 0 success, 1 bound or identity violation, 2 usage,
// 3 input format, 4 undecided-dominated result, 5 unsupported (n, 2k),
// 6 input form does not match (n, 2k).

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

namespace conelab {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "conelab-report/1";

enum ExitCode : int {
  kExitOk = 0,
  kExitViolation = 1,
  kExitUsage = 2,
  kExitFormat = 3,
  kExitUndecided = 4,
  kExitUnsupported = 5,
  kExitMismatch = 6,
};

struct RunConfig {
  std::string command;     // verify | gauge | volume | bounds | experiment
  std::string experiment;  // slopes | polarity | averages (experiment only)
  int n = 3;
  int degree = 4;          // 2k
  std::string cone = "nonneg";
  int samples = 0;         // 0: per-cone default
  std::uint64_t seed = 42;
  double tol = 1e-7;
  int grid = 2000;         // LP nodes for linpowers
  std::string mode = "exact";  // exact | numeric (verify arithmetic)
  int n_min = 3;
  int n_max = 6;
  int bootstrap = 1000;
  std::optional<std::string> input_form;  // polynomial document text, embedded

  // Output destinations and timing do not influence results and are kept out
  // of the embedded copy.
  std::string out;
  std::string csv;
  bool timing = false;
  int threads = 0;

  Json to_json() const;
  static RunConfig from_json(const Json& j);
  // Throws UsageError / UnsupportedError.
  void validate() const;
  int effective_samples() const;
};

struct Report {
  Json document;
  int exit_code = kExitOk;
  std::string csv;  // flat table, empty if the command has none

  std::string text() const;  // pretty-printed JSON with trailing newline
};

Report run(const RunConfig& config);

Report cmd_verify(const RunConfig& config);
Report cmd_gauge(const RunConfig& config);
Report cmd_volume(const RunConfig& config);
Report cmd_bounds(const RunConfig& config);
Report cmd_experiment(const RunConfig& config);

// Reads the "config" object of an existing report.
RunConfig config_from_report(const std::string& report_text);

}  // namespace conelab
