#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "json.hpp"

#include "granular/config.hpp"

namespace granular {

enum ExitCode : int { kExitOk = 0, kExitFailure = 1, kExitConfig = 2, kExitNumeric = 3 };

struct RunOptions {
  std::string seed;             // CLI override, empty when absent
  std::filesystem::path out;    // overrides output_dir when nonempty
  bool quiet = false;
};

// Loads the config, runs the simulation and diagnostics, and writes
// trajectory.csv, moments.csv and summary.json (plus gronwall.csv when the
// Orlicz diagnostics are enabled). On a numeric abort the last particle
// state goes to abort_state.csv.
int run_scenario(const std::filesystem::path& config_path, const RunOptions& options,
                 std::ostream& log, std::ostream& err);
int run_scenario(ExperimentConfig cfg, const RunOptions& options, std::ostream& log,
                 std::ostream& err);

// Cooling verdict for the kernel and initial datum of a config.
nlohmann::json classify_config(const ExperimentConfig& cfg);

// Bundled scenario configs by name.
// Path of a bundled scenario config, or empty when the name is unknown.
std::filesystem::path bundled_scenario(const std::string& name);

}  // namespace granular
