#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "granular/dsmc.hpp"

namespace granular {

inline constexpr std::uint64_t kDefaultSeed = 20240601;

struct ExperimentConfig {
  std::string scenario = "unnamed";
  std::string output_dir = "out";
  SimConfig sim{};
  bool seed_from_config = false;
  double record_interval = 0.1;
  bool stop_on_cooling = true;

  double moments_p_max = 3.0;
  double moments_a = 1.0;

  bool estimate_dissipation = false;
  std::size_t dissipation_samples = 400000;

  bool orlicz_enabled = false;
  int orlicz_bins = 64;
  std::string orlicz_young = "power";  // power | entropy | density
  double orlicz_power_p = 2.0;
  double gronwall_c_k = 1.0;

  // Names recorded for the run summary.
  std::string restitution_key = "constant";
  std::string angular_key = "isotropic";
  std::string distribution_key = "maxwellian";
  std::string samples_file;
};

// Flat `key = value` lines; `#` starts a comment. Unknown or duplicate keys
// and malformed values raise ConfigError with the line number and key.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = ".");
ExperimentConfig load_config(const std::filesystem::path& path);

// Every key with its resolved value, in schema order.
std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg);
void write_config(std::ostream& out, const ExperimentConfig& cfg);

// CLI flag > GRANULAR_SEED > config file > kDefaultSeed.
std::uint64_t resolve_seed(const ExperimentConfig& cfg, const std::string& cli_seed);

}  // namespace granular
