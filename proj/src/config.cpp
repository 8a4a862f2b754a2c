#include "granular/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "granular/error.hpp"
#include "granular/report.hpp"

namespace granular {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct Ctx {
  int line;
  const std::string& key;
  const std::string& value;

  [[noreturn]] void fail(const std::string& why) const {
    throw ConfigError("line " + std::to_string(line) + ": key '" + key + "': " + why, line, key);
  }
  double number() const {
    double x = 0.0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), x);
    if (r.ec != std::errc() || r.ptr != value.data() + value.size() || !std::isfinite(x)) {
      fail("expected a finite number, got '" + value + "'");
    }
    return x;
  }
  double positive() const {
    const double x = number();
    if (!(x > 0.0)) fail("must be positive");
    return x;
  }
  double nonnegative() const {
    const double x = number();
    if (x < 0.0) fail("must be nonnegative");
    return x;
  }
  std::uint64_t unsigned_integer() const {
    std::uint64_t x = 0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), x);
    if (r.ec != std::errc() || r.ptr != value.data() + value.size()) {
      fail("expected a nonnegative integer, got '" + value + "'");
    }
    return x;
  }
  int integer(int lo, int hi) const {
    const auto x = unsigned_integer();
    if (x < static_cast<std::uint64_t>(lo) || x > static_cast<std::uint64_t>(hi)) {
      fail("must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
    return static_cast<int>(x);
  }
  bool boolean() const {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    fail("expected true or false");
  }
  const std::string& choice(std::initializer_list<const char*> options) const {
    for (const char* o : options) {
      if (value == o) return value;
    }
    std::string list;
    for (const char* o : options) list += std::string(list.empty() ? "" : ", ") + o;
    fail("expected one of " + list);
  }
};

// Values gathered before the kernel and initial distribution are assembled.
struct Raw {
  double e = 1.0, c1 = 0.0, c2 = 0.0, ec = 0.0, eq = 1.0, kappa = 0.0;
  double temperature = 1.0, radius = 1.0, beam = 1.0, tail_a = 1.0, tail_eta = 1.0;
};

using Setter = std::function<void(ExperimentConfig&, Raw&, const Ctx&)>;

const std::vector<std::pair<std::string, Setter>>& schema() {
  static const std::vector<std::pair<std::string, Setter>> s = {
      {"scenario", [](auto& c, auto&, const Ctx& x) { c.scenario = x.value; }},
      {"output_dir", [](auto& c, auto&, const Ctx& x) { c.output_dir = x.value; }},
      {"seed",
       [](auto& c, auto&, const Ctx& x) {
         c.sim.seed = x.unsigned_integer();
         c.seed_from_config = true;
       }},
      {"n", [](auto& c, auto&, const Ctx& x) { c.sim.n = x.unsigned_integer(); }},
      {"dt", [](auto& c, auto&, const Ctx& x) { c.sim.dt = x.positive(); }},
      {"horizon", [](auto& c, auto&, const Ctx& x) { c.sim.horizon = x.positive(); }},
      {"energy_floor", [](auto& c, auto&, const Ctx& x) { c.sim.energy_floor = x.nonnegative(); }},
      {"refresh_interval",
       [](auto& c, auto&, const Ctx& x) { c.sim.refresh_interval = x.integer(1, 1 << 30); }},
      {"record_interval", [](auto& c, auto&, const Ctx& x) { c.record_interval = x.positive(); }},
      {"stop_on_cooling", [](auto& c, auto&, const Ctx& x) { c.stop_on_cooling = x.boolean(); }},
      {"kernel.dimension",
       [](auto& c, auto&, const Ctx& x) { c.sim.kernel.dimension = x.integer(2, kMaxDim); }},
      {"kernel.quadrature_order",
       [](auto& c, auto&, const Ctx& x) { c.sim.kernel.quadrature_order = x.integer(2, 512); }},
      {"kernel.alpha.coefficient",
       [](auto& c, auto&, const Ctx& x) { c.sim.kernel.intensity.coefficient = x.nonnegative(); }},
      {"kernel.alpha.exponent",
       [](auto& c, auto&, const Ctx& x) { c.sim.kernel.intensity.exponent = x.number(); }},
      {"kernel.restitution",
       [](auto& c, auto&, const Ctx& x) {
         c.restitution_key = x.choice({"constant", "visco", "energy", "sticky"});
       }},
      {"kernel.e", [](auto&, auto& r, const Ctx& x) { r.e = x.number(); }},
      {"kernel.visco.c1", [](auto&, auto& r, const Ctx& x) { r.c1 = x.nonnegative(); }},
      {"kernel.visco.c2", [](auto&, auto& r, const Ctx& x) { r.c2 = x.nonnegative(); }},
      {"kernel.energy.c", [](auto&, auto& r, const Ctx& x) { r.ec = x.nonnegative(); }},
      {"kernel.energy.q", [](auto&, auto& r, const Ctx& x) { r.eq = x.positive(); }},
      {"kernel.angular",
       [](auto& c, auto&, const Ctx& x) { c.angular_key = x.choice({"isotropic", "linear"}); }},
      {"kernel.angular.kappa", [](auto&, auto& r, const Ctx& x) { r.kappa = x.number(); }},
      {"init.distribution",
       [](auto& c, auto&, const Ctx& x) {
         c.distribution_key =
             x.choice({"maxwellian", "uniform_ball", "two_beam", "stretched_exp", "samples"});
       }},
      {"init.temperature", [](auto&, auto& r, const Ctx& x) { r.temperature = x.positive(); }},
      {"init.radius", [](auto&, auto& r, const Ctx& x) { r.radius = x.positive(); }},
      {"init.beam_speed", [](auto&, auto& r, const Ctx& x) { r.beam = x.positive(); }},
      {"init.tail_a", [](auto&, auto& r, const Ctx& x) { r.tail_a = x.positive(); }},
      {"init.tail_eta", [](auto&, auto& r, const Ctx& x) { r.tail_eta = x.positive(); }},
      {"init.samples_file", [](auto& c, auto&, const Ctx& x) { c.samples_file = x.value; }},
      {"init.energy", [](auto& c, auto&, const Ctx& x) { c.sim.initial_energy = x.nonnegative(); }},
      {"moments.p_max",
       [](auto& c, auto&, const Ctx& x) {
         c.moments_p_max = x.number();
         if (c.moments_p_max < 2.0 || std::fmod(2.0 * c.moments_p_max, 1.0) != 0.0) {
           x.fail("must be a half-integer >= 2");
         }
       }},
      {"moments.a",
       [](auto& c, auto&, const Ctx& x) {
         c.moments_a = x.number();
         if (!(c.moments_a >= 1.0 && c.moments_a <= 2.0)) x.fail("must lie in [1, 2]");
       }},
      {"dissipation.estimate",
       [](auto& c, auto&, const Ctx& x) { c.estimate_dissipation = x.boolean(); }},
      {"dissipation.samples",
       [](auto& c, auto&, const Ctx& x) { c.dissipation_samples = x.unsigned_integer(); }},
      {"orlicz.enabled", [](auto& c, auto&, const Ctx& x) { c.orlicz_enabled = x.boolean(); }},
      {"orlicz.bins", [](auto& c, auto&, const Ctx& x) { c.orlicz_bins = x.integer(4, 4096); }},
      {"orlicz.young",
       [](auto& c, auto&, const Ctx& x) { c.orlicz_young = x.choice({"power", "entropy", "density"}); }},
      {"orlicz.power_p",
       [](auto& c, auto&, const Ctx& x) {
         c.orlicz_power_p = x.number();
         if (!(c.orlicz_power_p > 1.0)) x.fail("must exceed 1");
       }},
      {"gronwall.c_k", [](auto& c, auto&, const Ctx& x) { c.gronwall_c_k = x.nonnegative(); }},
  };
  return s;
}

std::vector<Velocity> read_samples(const std::filesystem::path& path, int dim) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open samples file " + path.string(), 0, "init.samples_file");
  std::vector<Velocity> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    Velocity v(dim);
    for (int k = 0; k < dim; ++k) {
      if (!(row >> v[k])) {
        // A non-numeric first line is a header.
        if (out.empty() && k == 0) goto next;
        throw ConfigError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                              std::to_string(dim) + " numbers",
                          lineno, "init.samples_file");
      }
    }
    out.push_back(v);
  next:;
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  Raw raw;
  std::map<std::string, const Setter*> table;
  for (const auto& [k, f] : schema()) table[k] = &f;
  std::set<std::string> seen;
  std::map<std::string, int> lines;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'", lineno);
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto it = table.find(key);
    if (it == table.end()) {
      throw ConfigError("line " + std::to_string(lineno) + ": unknown key '" + key + "'", lineno, key);
    }
    if (!seen.insert(key).second) {
      throw ConfigError("line " + std::to_string(lineno) + ": duplicate key '" + key + "'", lineno, key);
    }
    if (value.empty()) {
      throw ConfigError("line " + std::to_string(lineno) + ": key '" + key + "' has no value", lineno, key);
    }
    lines[key] = lineno;
    (*it->second)(cfg, raw, Ctx{lineno, key, value});
  }

  auto line_of = [&](const std::string& k) { return lines.count(k) ? lines[k] : 0; };
  auto wrap = [&](const std::string& key, auto&& build) {
    try {
      build();
    } catch (const DomainError& e) {
      const int at = line_of(key);
      const std::string where = at > 0 ? "line " + std::to_string(at) + ": " : std::string();
      throw ConfigError(where + "key '" + key + "': " + e.what(), at, key);
    }
  };

  auto& k = cfg.sim.kernel;
  wrap("kernel.angular", [&] {
    k.angular = cfg.angular_key == "linear" ? AngularCrossSection::linear(k.dimension, raw.kappa)
                                            : AngularCrossSection::isotropic(k.dimension);
  });
  if (cfg.restitution_key == "constant") {
    k.restitution = ConstantRestitution{raw.e};
  } else if (cfg.restitution_key == "visco") {
    k.restitution = ViscoElasticRestitution{raw.c1, raw.c2};
  } else if (cfg.restitution_key == "energy") {
    k.restitution = EnergyDependentRestitution{raw.ec, raw.eq};
  } else {
    k.restitution = StickyRestitution{};
  }
  std::string restitution_key = "kernel.restitution";
  if (cfg.restitution_key == "constant" && lines.count("kernel.e")) restitution_key = "kernel.e";
  if (cfg.restitution_key == "visco") restitution_key = "kernel.visco.c1";
  if (cfg.restitution_key == "energy") restitution_key = "kernel.energy.c";
  wrap(restitution_key, [&] { k.validate(); });

  const auto& d = cfg.distribution_key;
  if (d == "maxwellian") {
    cfg.sim.initial = Maxwellian{raw.temperature};
  } else if (d == "uniform_ball") {
    cfg.sim.initial = UniformBall{raw.radius};
  } else if (d == "two_beam") {
    cfg.sim.initial = TwoBeam{raw.beam};
  } else if (d == "stretched_exp") {
    cfg.sim.initial = StretchedExponential{raw.tail_a, raw.tail_eta};
  } else {
    if (cfg.samples_file.empty()) {
      throw ConfigError("init.distribution = samples needs init.samples_file",
                        line_of("init.distribution"), "init.samples_file");
    }
    std::filesystem::path p(cfg.samples_file);
    if (p.is_relative()) p = base_dir / p;
    auto samples = read_samples(p, k.dimension);
    cfg.sim.n = samples.size();
    cfg.sim.initial = UserSamples{std::move(samples)};
  }
  if (!cfg.seed_from_config) cfg.sim.seed = kDefaultSeed;
  wrap("n", [&] { cfg.sim.validate(); });
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in, path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

std::vector<std::pair<std::string, std::string>> config_entries(const ExperimentConfig& cfg) {
  const auto& s = cfg.sim;
  const auto& k = s.kernel;
  auto num = [](double x) { return format_number(x); };
  auto flag = [](bool b) { return std::string(b ? "true" : "false"); };
  std::vector<std::pair<std::string, std::string>> out = {
      {"scenario", cfg.scenario},
      {"output_dir", cfg.output_dir},
      {"seed", std::to_string(s.seed)},
      {"n", std::to_string(s.n)},
      {"dt", num(s.dt)},
      {"horizon", num(s.horizon)},
      {"energy_floor", num(s.energy_floor)},
      {"refresh_interval", std::to_string(s.refresh_interval)},
      {"record_interval", num(cfg.record_interval)},
      {"stop_on_cooling", flag(cfg.stop_on_cooling)},
      {"kernel.dimension", std::to_string(k.dimension)},
      {"kernel.quadrature_order", std::to_string(k.quadrature_order)},
      {"kernel.alpha.coefficient", num(k.intensity.coefficient)},
      {"kernel.alpha.exponent", num(k.intensity.exponent)},
      {"kernel.restitution", cfg.restitution_key},
  };
  if (const auto* c = std::get_if<ConstantRestitution>(&k.restitution)) {
    out.emplace_back("kernel.e", num(c->e));
  } else if (const auto* v = std::get_if<ViscoElasticRestitution>(&k.restitution)) {
    out.emplace_back("kernel.visco.c1", num(v->c1));
    out.emplace_back("kernel.visco.c2", num(v->c2));
  } else if (const auto* en = std::get_if<EnergyDependentRestitution>(&k.restitution)) {
    out.emplace_back("kernel.energy.c", num(en->c));
    out.emplace_back("kernel.energy.q", num(en->q));
  }
  out.emplace_back("kernel.angular", cfg.angular_key);
  if (k.angular.kind() == AngularCrossSection::Kind::Linear) {
    out.emplace_back("kernel.angular.kappa", num(k.angular.kappa()));
  }
  out.emplace_back("init.distribution", cfg.distribution_key);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Maxwellian>) {
          out.emplace_back("init.temperature", num(d.temperature));
        } else if constexpr (std::is_same_v<T, UniformBall>) {
          out.emplace_back("init.radius", num(d.radius));
        } else if constexpr (std::is_same_v<T, TwoBeam>) {
          out.emplace_back("init.beam_speed", num(d.speed));
        } else if constexpr (std::is_same_v<T, StretchedExponential>) {
          out.emplace_back("init.tail_a", num(d.a));
          out.emplace_back("init.tail_eta", num(d.eta));
        } else {
          out.emplace_back("init.samples_file", cfg.samples_file);
        }
      },
      s.initial);
  out.emplace_back("init.energy", num(s.initial_energy));
  out.emplace_back("moments.p_max", num(cfg.moments_p_max));
  out.emplace_back("moments.a", num(cfg.moments_a));
  out.emplace_back("dissipation.estimate", flag(cfg.estimate_dissipation));
  out.emplace_back("dissipation.samples", std::to_string(cfg.dissipation_samples));
  out.emplace_back("orlicz.enabled", flag(cfg.orlicz_enabled));
  out.emplace_back("orlicz.bins", std::to_string(cfg.orlicz_bins));
  out.emplace_back("orlicz.young", cfg.orlicz_young);
  out.emplace_back("orlicz.power_p", num(cfg.orlicz_power_p));
  out.emplace_back("gronwall.c_k", num(cfg.gronwall_c_k));
  return out;
}

void write_config(std::ostream& out, const ExperimentConfig& cfg) {
  for (const auto& [k, v] : config_entries(cfg)) out << k << " = " << v << '\n';
}

std::uint64_t resolve_seed(const ExperimentConfig& cfg, const std::string& cli_seed) {
  auto parse = [](const std::string& s, const char* origin) {
    std::uint64_t x = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size()) {
      throw ConfigError(std::string(origin) + ": seed must be a nonnegative integer, got '" + s + "'",
                        0, "seed");
    }
    return x;
  };
  if (!cli_seed.empty()) return parse(cli_seed, "--seed");
  if (const char* env = std::getenv("GRANULAR_SEED"); env && *env) return parse(env, "GRANULAR_SEED");
  if (cfg.seed_from_config) return cfg.sim.seed;
  return kDefaultSeed;
}

}  // namespace granular
