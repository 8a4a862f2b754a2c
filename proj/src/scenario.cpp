#include "granular/scenario.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

#include "granular/cooling.hpp"
#include "granular/error.hpp"
#include "granular/haff.hpp"
#include "granular/moment_bounds.hpp"
#include "granular/moments.hpp"
#include "granular/orlicz.hpp"
#include "granular/report.hpp"

#ifndef GRANULAR_SCENARIO_DIR
#define GRANULAR_SCENARIO_DIR "scenarios"
#endif

namespace granular {

namespace {

constexpr int kSchemaVersion = 1;

nlohmann::json config_json(const ExperimentConfig& cfg) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [k, v] : config_entries(cfg)) j[k] = v;
  return j;
}

nlohmann::json verdict_json(const CoolingVerdict& v) {
  return {{"verdict", to_string(v.verdict)},
          {"rationale", to_string(v.rationale)},
          {"bound", v.bound ? json_number(*v.bound) : nlohmann::json(nullptr)}};
}

YoungFunction make_young(const ExperimentConfig& cfg, const DensityGrid& f0) {
  if (cfg.orlicz_young == "entropy") return YoungFunction::entropy();
  if (cfg.orlicz_young == "density") return build_young_from_density(f0);
  return YoungFunction::power(cfg.orlicz_power_p);
}

void write_state(const std::filesystem::path& path, const ParticleEnsemble& ens) {
  std::ofstream out(path);
  out << "t";
  for (int k = 0; k < ens.dim; ++k) out << ",v" << k;
  out << '\n';
  for (const auto& v : ens.v) {
    out << format_number(ens.time);
    for (int k = 0; k < ens.dim; ++k) out << ',' << format_number(v[k]);
    out << '\n';
  }
}

ParticleEnsemble initial_ensemble(const ExperimentConfig& cfg) {
  return init_ensemble(cfg.sim.initial, cfg.sim.kernel.dimension, cfg.sim.n, cfg.sim.seed,
                       cfg.sim.initial_energy);
}

}  // namespace

std::filesystem::path bundled_scenario(const std::string& name) {
  const std::filesystem::path p = std::filesystem::path(GRANULAR_SCENARIO_DIR) / (name + ".conf");
  return std::filesystem::exists(p) ? p : std::filesystem::path{};
}

nlohmann::json classify_config(const ExperimentConfig& cfg) {
  const ParticleEnsemble ens = initial_ensemble(cfg);
  const double e0 = ens.energy();
  const CoolingVerdict v = classify_cooling(cfg.sim.kernel, TailClass::of(cfg.sim.initial), e0);
  nlohmann::json j = verdict_json(v);
  j["initial_energy"] = e0;
  return j;
}

int run_scenario(const std::filesystem::path& config_path, const RunOptions& options,
                 std::ostream& log, std::ostream& err) {
  ExperimentConfig cfg;
  try {
    cfg = load_config(config_path);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  return run_scenario(std::move(cfg), options, log, err);
}

int run_scenario(ExperimentConfig cfg, const RunOptions& options, std::ostream& log,
                 std::ostream& err) {
  try {
    cfg.sim.seed = resolve_seed(cfg, options.seed);
    cfg.seed_from_config = true;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const std::filesystem::path dir = options.out.empty() ? std::filesystem::path(cfg.output_dir) : options.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) {
    err << "cannot create output directory " << dir << ": " << ec.message() << '\n';
    return kExitFailure;
  }

  ParticleEnsemble initial;
  try {
    initial = initial_ensemble(cfg);
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }
  const double e0 = initial.energy();
  const auto& kernel = cfg.sim.kernel;

  nlohmann::json summary;
  summary["schema_version"] = kSchemaVersion;
  summary["scenario"] = cfg.scenario;
  summary["seed"] = cfg.sim.seed;
  summary["config"] = config_json(cfg);
  summary["initial_energy"] = e0;

  CoolingVerdict verdict;
  try {
    verdict = classify_cooling(kernel, TailClass::of(cfg.sim.initial), e0);
  } catch (const Error& e) {
    err << "classification failed: " << e.what() << '\n';
  }

  // Diagnostics gathered at every record.
  const auto grid = half_integer_grid(0.5, cfg.moments_p_max);
  std::vector<MomentSnapshot> snapshots;
  std::vector<DensityGrid> densities;
  std::vector<GronwallSample> gronwall;
  const double hist_radius = 6.0 * std::sqrt(e0 / kernel.dimension);

  DiagnosticsSchedule schedule;
  schedule.record_interval = cfg.record_interval;
  schedule.stop_on_cooling = cfg.stop_on_cooling;
  schedule.estimate_dissipation = cfg.estimate_dissipation;
  schedule.dissipation.samples = cfg.dissipation_samples;
  schedule.on_record = [&](const ParticleEnsemble& ens, double t) {
    snapshots.push_back({t, moments(ens, grid, cfg.moments_a), {}});
    if (cfg.orlicz_enabled) {
      densities.push_back(radial_histogram(ens, cfg.orlicz_bins, hist_radius));
      double l1 = 0.0;
      for (const auto& v : ens.v) l1 += (1.0 + v.norm()) / static_cast<double>(ens.size());
      gronwall.push_back({t, 0.0, 0.0, l1});
    }
  };

  TrajectoryRecord rec;
  try {
    rec = run(cfg.sim, initial, schedule);
  } catch (const SimulationAbort& e) {
    err << "numeric abort: " << e.what() << '\n';
    write_state(dir / "abort_state.csv", e.state);
    summary["status"] = "aborted";
    summary["error"] = e.what();
    write_json(dir / "summary.json", summary);
    return kExitNumeric;
  } catch (const NumericError& e) {
    err << "numeric abort: " << e.what() << '\n';
    summary["status"] = "aborted";
    summary["error"] = e.what();
    write_json(dir / "summary.json", summary);
    return kExitNumeric;
  } catch (const DomainError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  }

  summary["status"] = "ok";
  summary["final_energy"] = rec.rows.back().energy;
  summary["final_time"] = rec.rows.back().t;
  summary["collisions"] = rec.collisions;
  summary["majorant"] = {{"refreshes", rec.majorant_refreshes},
                         {"violations", rec.majorant_violations}};
  nlohmann::json cooling = verdict_json(verdict);
  cooling["measured_time"] =
      rec.cooling_time ? json_number(*rec.cooling_time) : nlohmann::json(nullptr);
  cooling["energy_floor"] = cfg.sim.energy_floor;
  summary["cooling"] = cooling;

  // Haff fit on the recorded energies.
  std::vector<double> ts, es;
  for (const auto& r : rec.rows) {
    if (r.energy > 0.0) {
      ts.push_back(r.t);
      es.push_back(r.energy);
    }
  }
  try {
    const HaffFit fit = haff_fit(ts, es);
    summary["haff"] = {{"e0", fit.e0},
                       {"tau", json_number(fit.tau)},
                       {"kappa", fit.exponent},
                       {"residual", fit.residual}};
  } catch (const Error& e) {
    summary["haff"] = {{"e0", nullptr}, {"tau", nullptr}, {"kappa", nullptr},
                       {"residual", nullptr}, {"note", e.what()}};
  }

  // Supersolution bounds for the normalized moments.
  nlohmann::json mb = {{"p_max", cfg.moments_p_max}, {"a", cfg.moments_a}};
  if (!kernel.intensity.bounded_near_zero()) {
    mb["computed"] = false;
    mb["note"] = "intensity unbounded near zero energy";
  } else {
    try {
      const auto sys = MomentOdeSystem::make(cfg.moments_a, cfg.moments_p_max, kernel.intensity);
      const auto z0 = bound_initial_data(sys, snapshots.front().moments);
      std::vector<double> et, ee;
      for (const auto& r : rec.rows) {
        et.push_back(r.t);
        ee.push_back(std::max(r.energy, 0.0));
      }
      const auto traj = integrate_moment_bounds(sys, z0, tabulated_energy(et, ee),
                                                rec.rows.back().t, cfg.record_interval);
      std::size_t exceed = 0, cursor = 0;
      for (auto& s : snapshots) {
        while (cursor + 1 < traj.t.size() && traj.t[cursor] < s.t - 1e-9) ++cursor;
        s.bound.assign(s.moments.p.size(), std::nan(""));
        for (std::size_t i = 0; i < sys.grid.size(); ++i) {
          const std::size_t k = s.moments.index(sys.grid[i]);
          s.bound[k] = traj.z[cursor][i];
          const double se_z = s.moments.se[k] * s.moments.z[k] / std::max(s.moments.m[k], 1e-300);
          if (s.moments.z[k] - 2.0 * se_z > s.bound[k]) ++exceed;
        }
      }
      mb["computed"] = true;
      mb["p0"] = json_number(sys.p0());
      mb["exceedances"] = exceed;
    } catch (const Error& e) {
      mb["computed"] = false;
      mb["note"] = e.what();
    }
  }
  summary["moment_bounds"] = mb;

  if (cfg.orlicz_enabled && !densities.empty()) {
    const YoungFunction lambda = make_young(cfg, densities.front());
    for (std::size_t k = 0; k < densities.size(); ++k) {
      const auto est = orlicz_norm_with_error(densities[k], lambda, 50, cfg.sim.seed + k);
      gronwall[k].norm = est.value;
      gronwall[k].norm_se = est.standard_error;
    }
    const auto env = gronwall_envelope(gronwall, cfg.gronwall_c_k);
    std::ofstream g(dir / "gronwall.csv");
    g << "t,norm,norm_se,l1,envelope\n";
    for (std::size_t k = 0; k < gronwall.size(); ++k) {
      g << format_number(gronwall[k].t) << ',' << format_number(gronwall[k].norm) << ','
        << format_number(gronwall[k].norm_se) << ',' << format_number(gronwall[k].l1) << ','
        << format_number(env.envelope[k]) << '\n';
    }
    summary["gronwall"] = {{"enabled", true},
                           {"young", lambda.name()},
                           {"c_k", cfg.gronwall_c_k},
                           {"crossings", env.crossings},
                           {"crossing_free", env.crossing_free()},
                           {"minimal_c_k", env.minimal_c_k}};
  } else {
    summary["gronwall"] = {{"enabled", false}};
  }

  {
    std::ofstream t(dir / "trajectory.csv");
    write_trajectory_csv(t, rec.rows);
    std::ofstream m(dir / "moments.csv");
    write_moments_csv(m, snapshots);
  }
  write_json(dir / "summary.json", summary);

  if (!options.quiet) {
    log << "scenario " << cfg.scenario << ": " << rec.rows.size() << " records, "
        << rec.collisions << " collisions, E " << format_number(e0) << " -> "
        << format_number(rec.rows.back().energy) << ", cooling verdict "
        << to_string(verdict.verdict) << '\n';
    log << "outputs in " << dir.string() << '\n';
  }
  return kExitOk;
}

}  // namespace granular
