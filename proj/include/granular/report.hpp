#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "granular/dsmc.hpp"
#include "granular/moments.hpp"

namespace granular {

// Decimal with 17 significant digits; "nan", "inf", "-inf" for non-finite.
std::string format_number(double x);

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows);

struct MomentSnapshot {
  double t = 0.0;
  MomentVector moments;
  std::vector<double> bound;  // supersolution z_p on the same grid; may be empty
};

// Long format: t, p, m_p, se, z_p, z_bound.
void write_moments_csv(std::ostream& out, const std::vector<MomentSnapshot>& snapshots);

// Reads columns t and E from a trajectory CSV.
void read_trajectory_csv(std::istream& in, std::vector<double>& t, std::vector<double>& energy);

void write_json(const std::filesystem::path& path, const nlohmann::json& j);
// JSON number or null when non-finite.
nlohmann::json json_number(double x);

}  // namespace granular
