#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "granular/config.hpp"
#include "granular/error.hpp"
#include "granular/report.hpp"
#include "granular/scenario.hpp"
#include "granular/verify.hpp"

namespace fs = std::filesystem;
using namespace granular;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("granular-test-" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string config_error(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_config(in);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

nlohmann::json summary_of(const fs::path& dir) {
  return nlohmann::json::parse(slurp(dir / "summary.json"));
}

}  // namespace

TEST_CASE("config parsing") {
  SUBCASE("values and comments") {
    std::istringstream in(
        "# comment\nscenario = demo\nn = 500 # trailing\nkernel.restitution = visco\n"
        "kernel.visco.c1 = 0.3\nkernel.visco.c2 = 0.05\ninit.distribution = two_beam\n"
        "init.beam_speed = 2\nmoments.p_max = 4.5\n");
    const auto cfg = parse_config(in);
    CHECK(cfg.scenario == "demo");
    CHECK(cfg.sim.n == 500);
    CHECK(std::holds_alternative<ViscoElasticRestitution>(cfg.sim.kernel.restitution));
    CHECK(std::get<TwoBeam>(cfg.sim.initial).speed == 2.0);
    CHECK(cfg.moments_p_max == 4.5);
  }
  SUBCASE("diagnostics name the line and key") {
    const auto unknown = config_error("n = 10\nbogus = 1\n");
    CHECK(unknown.find("line 2") != std::string::npos);
    CHECK(unknown.find("bogus") != std::string::npos);
    CHECK(config_error("n = 10\nn = 20\n").find("line 2") != std::string::npos);
    CHECK(config_error("dt\n").find("line 1") != std::string::npos);
    CHECK(config_error("dt = \n").find("'dt'") != std::string::npos);
    CHECK(config_error("n = ten\n").find("'n'") != std::string::npos);
    CHECK(config_error("kernel.e = 1.5\n").find("kernel.e") != std::string::npos);
    CHECK(config_error("kernel.restitution = bouncy\n").find("line 1") != std::string::npos);
    CHECK(config_error("moments.p_max = 3.25\n").find("moments.p_max") != std::string::npos);
    CHECK_FALSE(config_error("dt = -1\n").empty());
  }
  SUBCASE("round trip through write_config") {
    const auto cfg = load_config(bundled_scenario("bounded-infinite"));
    std::stringstream ss;
    write_config(ss, cfg);
    const auto back = parse_config(ss);
    CHECK(config_entries(back) == config_entries(cfg));
  }
  SUBCASE("seed precedence") {
    std::istringstream in("seed = 77\n");
    const auto cfg = parse_config(in);
    std::istringstream bare("n = 10\n");
    const auto plain = parse_config(bare);
    ::unsetenv("GRANULAR_SEED");
    CHECK(resolve_seed(cfg, "") == 77);
    CHECK(resolve_seed(plain, "") == kDefaultSeed);
    ::setenv("GRANULAR_SEED", "88", 1);
    CHECK(resolve_seed(cfg, "") == 88);
    CHECK(resolve_seed(cfg, "99") == 99);
    ::setenv("GRANULAR_SEED", "x", 1);
    CHECK_THROWS_AS(resolve_seed(cfg, ""), ConfigError);
    ::unsetenv("GRANULAR_SEED");
  }
}

TEST_CASE("report formatting") {
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(2.0) == "2");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
  std::stringstream ss("t,E,m_3/2\n0,1,2\n1,0.5,2\n");
  std::vector<double> t, e;
  read_trajectory_csv(ss, t, e);
  CHECK(e == std::vector<double>{1.0, 0.5});
  std::stringstream missing("t,x\n0,1\n");
  CHECK_THROWS(read_trajectory_csv(missing, t, e));
}

TEST_CASE("bundled scenarios") {
  std::ostringstream log, err;
  SUBCASE("elastic-maxwellian keeps E constant") {
    const auto dir = scratch("elastic");
    REQUIRE(run_scenario(bundled_scenario("elastic-maxwellian"), {"", dir, true}, log, err) == kExitOk);
    std::ifstream csv(dir / "trajectory.csv");
    std::string header;
    std::getline(csv, header);
    CHECK(header == "t,E,m_3/2,m_2,m_3,collisions,dEdt_measured,D_estimate");
    csv.seekg(0);
    std::vector<double> t, e;
    read_trajectory_csv(csv, t, e);
    REQUIRE(e.size() > 10);
    for (double x : e) CHECK(x == doctest::Approx(e.front()).epsilon(1e-9));
    CHECK(slurp(dir / "moments.csv").rfind("t,p,m_p,se,z_p,z_bound\n", 0) == 0);
    const auto s = summary_of(dir);
    CHECK(s["status"] == "ok");
    CHECK(s["config"]["scenario"] == "elastic-maxwellian");
  }
  SUBCASE("haff-e09 populates the Haff exponent") {
    const auto dir = scratch("haff");
    REQUIRE(run_scenario(bundled_scenario("haff-e09"), {"", dir, true}, log, err) == kExitOk);
    const auto s = summary_of(dir);
    REQUIRE(s["haff"]["kappa"].is_number());
    CHECK(s["haff"]["kappa"].get<double>() > 1.5);
    CHECK(s["cooling"]["verdict"] == "infinite");
  }
  SUBCASE("identical config and seed give identical bytes") {
    const auto a = scratch("repeat-a"), b = scratch("repeat-b");
    auto cfg = load_config(bundled_scenario("bounded-infinite"));
    cfg.sim.horizon = 5.0;
    REQUIRE(run_scenario(cfg, {"", a, true}, log, err) == kExitOk);
    REQUIRE(run_scenario(cfg, {"", b, true}, log, err) == kExitOk);
    for (const char* f : {"trajectory.csv", "moments.csv", "summary.json", "gronwall.csv"}) {
      CAPTURE(f);
      CHECK(slurp(a / f) == slurp(b / f));
      CHECK_FALSE(slurp(a / f).empty());
    }
    const auto c = scratch("repeat-c");
    REQUIRE(run_scenario(cfg, {"5", c, true}, log, err) == kExitOk);
    CHECK(slurp(a / "trajectory.csv") != slurp(c / "trajectory.csv"));
  }
  SUBCASE("sticky run records the cooling time") {
    const auto dir = scratch("sticky");
    REQUIRE(run_scenario(bundled_scenario("sticky-finite"), {"", dir, true}, log, err) == kExitOk);
    const auto s = summary_of(dir);
    CHECK(s["cooling"]["verdict"] == "finite");
    REQUIRE(s["cooling"]["measured_time"].is_number());
    CHECK(s["cooling"]["measured_time"].get<double>() < s["cooling"]["bound"].get<double>());
    CHECK(s["moment_bounds"]["computed"] == false);
  }
}

TEST_CASE("run failures map to exit codes") {
  std::ostringstream log, err;
  const auto dir = scratch("bad");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bad.conf") << "n = 100\nkernel.e == 0.5\n";
  }
  CHECK(run_scenario(dir / "bad.conf", {"", dir / "out", true}, log, err) == kExitConfig);
  CHECK(err.str().find("line 2") != std::string::npos);
  CHECK(run_scenario(dir / "missing.conf", {"", dir / "out", true}, log, err) == kExitConfig);

  // alpha = 1/E on an ensemble whose energy underflows to zero.
  ExperimentConfig cfg;
  cfg.sim.n = 4;
  cfg.sim.horizon = 1.0;
  cfg.sim.dt = 0.1;
  cfg.sim.kernel.restitution = StickyRestitution{};
  cfg.sim.kernel.intensity = {1.0, -1.0};
  cfg.sim.initial = UserSamples{{Velocity{1e-160, 0.0, 0.0}, Velocity{-1e-160, 0.0, 0.0}}};
  cfg.distribution_key = "samples";
  cfg.restitution_key = "sticky";
  const auto out = dir / "abort";
  CHECK(run_scenario(cfg, {"", out, true}, log, err) == kExitNumeric);
  CHECK(fs::exists(out / "abort_state.csv"));
  CHECK(summary_of(out)["status"] == "aborted");
}

TEST_CASE("classification from configs") {
  const auto j = classify_config(load_config(bundled_scenario("sticky-finite")));
  CHECK(j["verdict"] == "finite");
  CHECK(j["bound"].get<double>() == doctest::Approx(2.8284271275746167).epsilon(1e-6));
}

TEST_CASE("verification harness") {
  for (const auto& suite : suite_names()) {
    CAPTURE(suite);
    for (const auto& c : run_suite(suite)) {
      CAPTURE(c.name);
      CHECK(c.passed);
    }
  }
  std::ostringstream out;
  CHECK(verify("collision-identities", {}, out) == 0);
  VerifyOptions faulty;
  faulty.inject_deltav_sign_fault = true;
  std::ostringstream bad;
  CHECK(verify("all", faulty, bad) == 1);
  CHECK(bad.str().find("counterexample") != std::string::npos);
  CHECK_THROWS_AS(run_suite("nope"), DomainError);
}
