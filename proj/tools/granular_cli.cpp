#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "granular/config.hpp"
#include "granular/error.hpp"
#include "granular/haff.hpp"
#include "granular/report.hpp"
#include "granular/scenario.hpp"
#include "granular/verify.hpp"

namespace fs = std::filesystem;
using namespace granular;

namespace {

// Accepts a config path or the name of a bundled scenario.
fs::path resolve_config(const std::string& arg) {
  if (fs::exists(arg)) return arg;
  if (auto p = bundled_scenario(arg); !p.empty()) return p;
  return arg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"granular: inelastic Boltzmann DSMC simulator and verification harness"};
  app.require_subcommand(1);

  std::string config, seed, out;
  bool quiet = false;

  auto* run = app.add_subcommand("run", "run a scenario and write CSV/JSON outputs");
  run->add_option("--config,-c", config, "config file or bundled scenario name")->required();
  run->add_option("--seed", seed, "seed override (beats GRANULAR_SEED and the config)");
  run->add_option("--out,-o", out, "output directory (overrides output_dir)");
  run->add_flag("--quiet,-q", quiet, "suppress progress output");

  std::string suite = "all";
  bool inject = false;
  auto* ver = app.add_subcommand("verify", "run an acceptance battery");
  ver->add_option("suite", suite, "suite name")
      ->check(CLI::IsMember({"collision-identities", "geometry-lemmas", "orlicz-appendix",
                             "moments-povzner", "cooling-criteria", "all"}));
  ver->add_option("--seed", seed, "seed for random inputs");
  ver->add_flag("--inject-deltav-fault", inject, "flip the energy-loss sign to exercise the harness");
  ver->add_flag("--quiet,-q", quiet, "print only the first counterexample");

  auto* cls = app.add_subcommand("classify", "print the cooling verdict for a config");
  cls->add_option("--config,-c", config, "config file or bundled scenario name")->required();
  cls->add_option("--seed", seed, "seed override");

  std::string csv;
  auto* fit = app.add_subcommand("fit", "Haff fit of E(t) from a trajectory CSV");
  fit->add_option("csv", csv, "trajectory CSV with columns t and E")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      RunOptions o;
      o.seed = seed;
      o.out = out;
      o.quiet = quiet;
      return run_scenario(resolve_config(config), o, std::cout, std::cerr);
    }
    if (*ver) {
      VerifyOptions o;
      if (!seed.empty()) o.seed = std::stoull(seed);
      o.inject_deltav_sign_fault = inject;
      if (quiet) {
        std::ostringstream sink;
        const int rc = verify(suite, o, sink);
        if (rc != 0) {
          const std::string s = sink.str();
          std::cout << s.substr(s.find("first counterexample"));
        }
        return rc;
      }
      return verify(suite, o, std::cout);
    }
    if (*cls) {
      ExperimentConfig cfg = load_config(resolve_config(config));
      cfg.sim.seed = resolve_seed(cfg, seed);
      std::cout << classify_config(cfg).dump(2) << '\n';
      return kExitOk;
    }
    if (*fit) {
      std::ifstream in(csv);
      if (!in) throw ConfigError("cannot open " + csv);
      std::vector<double> t, e;
      read_trajectory_csv(in, t, e);
      const HaffFit f = haff_fit(t, e);
      const nlohmann::json j = {{"e0", f.e0}, {"tau", json_number(f.tau)},
                                {"kappa", f.exponent}, {"residual", f.residual}};
      std::cout << j.dump(2) << '\n';
      return kExitOk;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
