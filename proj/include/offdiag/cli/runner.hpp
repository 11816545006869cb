#pragma once
// Scenario dispatch: runs one scenario kind end to end, collects tables and
// residuals, and writes the artifacts and the manifest.

#include <array>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "offdiag/cli/report.hpp"
#include "offdiag/cli/scenario.hpp"

namespace offdiag {

struct RunOptions {
  std::filesystem::path out_dir = "offdiag-out";
  std::string format = "csv";                 // csv or json
  std::optional<std::array<int, 3>> sample;   // grid node counts per axis
  std::optional<double> tolerance_all;        // replaces every upper-bound tolerance
  std::map<std::string, double> tolerance;    // per-residual overrides, applied last
  bool write = true;
};

enum ExitCode : int { kExitPass = 0, kExitResidual = 1, kExitError = 2 };

struct RunOutcome {
  RunManifest manifest;
  std::vector<Table> tables;
  std::string model;  // serialized FModel when the scenario asked for "model"
  int exit_code = kExitError;
};

/// Module errors are caught and reported with the scenario name and kind.
RunOutcome run_scenario(const Scenario& s, const RunOptions& o);

/// Runs independent scenarios on up to jobs threads; results keep input order.
std::vector<RunOutcome> run_batch(const std::vector<Scenario>& ss, const RunOptions& o, int jobs);

/// Directory of the bundled corpus (OFFDIAG_SCENARIO_DIR overrides the built-in path).
std::filesystem::path bundled_scenario_dir();
/// *.scn files in dir, sorted by name.
std::vector<std::filesystem::path> list_scenarios(const std::filesystem::path& dir);
/// A readable path is used as is, otherwise a bundled scenario of that name.
std::filesystem::path resolve_scenario(const std::string& arg);

}  // namespace offdiag
