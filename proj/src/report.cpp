#include "granular/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "granular/error.hpp"

namespace granular {

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
  return std::string(buf, r.ptr);
}

void write_trajectory_csv(std::ostream& out, const std::vector<TrajectoryRow>& rows) {
  out << "t,E,m_3/2,m_2,m_3,collisions,dEdt_measured,D_estimate\n";
  for (const auto& r : rows) {
    out << format_number(r.t) << ',' << format_number(r.energy) << ',' << format_number(r.m32)
        << ',' << format_number(r.m2) << ',' << format_number(r.m3) << ',' << r.collisions << ','
        << format_number(r.dEdt_measured) << ',' << format_number(r.d_estimate) << '\n';
  }
}

void write_moments_csv(std::ostream& out, const std::vector<MomentSnapshot>& snapshots) {
  out << "t,p,m_p,se,z_p,z_bound\n";
  for (const auto& s : snapshots) {
    for (std::size_t i = 0; i < s.moments.p.size(); ++i) {
      const double b = i < s.bound.size() ? s.bound[i] : std::nan("");
      out << format_number(s.t) << ',' << format_number(s.moments.p[i]) << ','
          << format_number(s.moments.m[i]) << ',' << format_number(s.moments.se[i]) << ','
          << format_number(s.moments.z[i]) << ',' << format_number(b) << '\n';
    }
  }
}

void read_trajectory_csv(std::istream& in, std::vector<double>& t, std::vector<double>& energy) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty trajectory file");
  std::vector<std::string> head;
  {
    std::istringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) head.push_back(cell);
  }
  int ti = -1, ei = -1;
  for (std::size_t k = 0; k < head.size(); ++k) {
    if (head[k] == "t") ti = static_cast<int>(k);
    if (head[k] == "E") ei = static_cast<int>(k);
  }
  if (ti < 0 || ei < 0) throw ConfigError("trajectory header needs columns t and E", 1);
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream rs(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(rs, cell, ',')) cells.push_back(cell);
    if (cells.size() <= static_cast<std::size_t>(std::max(ti, ei))) {
      throw ConfigError("trajectory row is short", lineno);
    }
    try {
      t.push_back(std::stod(cells[static_cast<std::size_t>(ti)]));
      energy.push_back(std::stod(cells[static_cast<std::size_t>(ei)]));
    } catch (const std::exception&) {
      throw ConfigError("trajectory row is not numeric", lineno);
    }
  }
}

void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

nlohmann::json json_number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace granular
