#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "flexcap/mpc.hpp"
#include "flexcap/scenario.hpp"

using namespace flexcap;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("flexcap_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("synthesized day prices above the cap exactly at the target hours") {
  const auto sc = scenario::synthesize_apx_like(2024);
  CHECK(sc.horizon == 24);
  CHECK(sc.pi_des.front() == 75.0);
  const auto baseline = mpc::baseline_trajectory(sc);
  const int k = baseline.bus_pos(sc.constrained_bus());
  const std::vector<int> targets{9, 10, 11, 12, 13, 18, 19, 20};
  for (int t = 1; t <= 24; ++t) {
    const bool should_exceed =
        std::find(targets.begin(), targets.end(), t) != targets.end();
    CHECK((baseline.steps[t - 1].lmp[k] > 75.0) == should_exceed);
  }
}

TEST_CASE("synthesis is deterministic per seed") {
  const auto a = temp_dir("synth_a");
  const auto b = temp_dir("synth_b");
  scenario::save_scenario(scenario::synthesize_apx_like(7), a);
  scenario::save_scenario(scenario::synthesize_apx_like(7), b);
  CHECK(slurp(a / "scenario.json") == slurp(b / "scenario.json"));
  CHECK(slurp(a / "series.csv") == slurp(b / "series.csv"));

  const auto c = temp_dir("synth_c");
  scenario::save_scenario(scenario::synthesize_apx_like(8), c);
  CHECK(slurp(a / "series.csv") != slurp(c / "series.csv"));
}

TEST_CASE("empty target set keeps every hour below the cap") {
  scenario::SynthTargets targets;
  targets.hours_above_cap.clear();
  const auto sc = scenario::synthesize_apx_like(3, targets);
  const auto baseline = mpc::baseline_trajectory(sc);
  const int k = baseline.bus_pos(sc.constrained_bus());
  for (const auto& s : baseline.steps) CHECK(s.lmp[k] < 75.0);

  for (int t = 1; t <= sc.horizon; ++t) {
    const auto res =
        market::compute_flex_required(sc.network, sc.inputs_for(t), t);
    CHECK(res.flex_required.at(sc.constrained_bus()) == doctest::Approx(0.0));
  }
}

TEST_CASE("contradictory targets fail calibration") {
  scenario::SynthTargets targets;
  targets.hours_above_cap = {25};
  CHECK_THROWS_AS((void)scenario::synthesize_apx_like(1, targets), Error);
}

TEST_CASE("scenario save/load round trip") {
  const auto dir = temp_dir("roundtrip");
  const auto sc = scenario::synthesize_apx_like(2024);
  scenario::save_scenario(sc, dir);
  const auto back = scenario::load_scenario(dir / "scenario.json");

  CHECK(back.horizon == sc.horizon);
  CHECK(back.network.buses.size() == sc.network.buses.size());
  CHECK(back.network.lines.size() == sc.network.lines.size());
  CHECK(back.a_trans == sc.a_trans);
  CHECK(back.a_dist == sc.a_dist);
  CHECK(back.b_load == sc.b_load);
  CHECK(back.demand_lo == sc.demand_lo);
  CHECK(back.demand_hi == sc.demand_hi);
  CHECK(back.pi_des == sc.pi_des);
  REQUIRE(back.ess.has_value());
  CHECK(back.ess->capacity_mwh == sc.ess->capacity_mwh);
  CHECK(back.ess->initial_soc == sc.ess->initial_soc);
  for (std::size_t i = 0; i < sc.network.lines.size(); ++i) {
    CHECK(back.network.lines[i].reactance == sc.network.lines[i].reactance);
    CHECK(back.network.lines[i].flow_limit == sc.network.lines[i].flow_limit);
  }

  // Saving the reloaded scenario must reproduce the files byte for byte.
  const auto dir2 = temp_dir("roundtrip2");
  scenario::save_scenario(back, dir2);
  CHECK(slurp(dir / "series.csv") == slurp(dir2 / "series.csv"));
}

TEST_CASE("per-hour price caps survive the round trip") {
  const auto dir = temp_dir("pi_series");
  auto sc = scenario::synthesize_apx_like(2024);
  for (int t = 0; t < sc.horizon; ++t) sc.pi_des[t] = 70.0 + t;
  scenario::save_scenario(sc, dir);
  const auto back = scenario::load_scenario(dir / "scenario.json");
  CHECK(back.pi_des == sc.pi_des);
}

TEST_CASE("short series is a validation error") {
  const auto dir = temp_dir("short_series");
  scenario::save_scenario(scenario::synthesize_apx_like(2024), dir);
  // Drop the last data row.
  std::string csv = slurp(dir / "series.csv");
  csv.erase(csv.rfind("24,"));
  std::ofstream(dir / "series.csv", std::ios::trunc) << csv;
  try {
    (void)scenario::load_scenario(dir / "scenario.json");
    FAIL("expected series-length validation error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::validation_error);
    CHECK(std::string(e.what()).find("series length") != std::string::npos);
  }
}

TEST_CASE("inverted merit order warns by default and fails in strict mode") {
  const auto dir = temp_dir("merit");
  auto sc = scenario::synthesize_apx_like(2024);
  sc.a_dist[3] = sc.a_trans[3] + 1.0;
  scenario::save_scenario(sc, dir);

  std::vector<std::string> warnings;
  (void)scenario::load_scenario(dir / "scenario.json", false, &warnings);
  CHECK(!warnings.empty());
  CHECK_THROWS_AS((void)scenario::load_scenario(dir / "scenario.json", true),
                  Error);
}

TEST_CASE("malformed series cells report line and column") {
  const auto dir = temp_dir("badcell");
  scenario::save_scenario(scenario::synthesize_apx_like(2024), dir);
  std::string csv = slurp(dir / "series.csv");
  const auto pos = csv.find("\n3,");
  REQUIRE(pos != std::string::npos);
  csv.replace(pos, 3, "\n3,oops");  // row 3's a_trans becomes garbage
  std::ofstream(dir / "series.csv", std::ios::trunc) << csv;
  try {
    (void)scenario::load_scenario(dir / "scenario.json");
    FAIL("expected parse error");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::parse_error);
  }
}

TEST_CASE("bundled scenario loads and is feasible for the whole day") {
  const auto path = fs::path(FLEXCAP_SOURCE_DIR) / "data" / "bundled";
  REQUIRE(fs::exists(path / "scenario.json"));
  std::vector<std::string> warnings;
  const auto sc = scenario::load_scenario(path / "scenario.json", true, &warnings);
  CHECK(warnings.empty());
  CHECK(sc.horizon == 24);
  CHECK(sc.pi_des.front() == 75.0);
  REQUIRE(sc.ess.has_value());
  CHECK(sc.ess->capacity_mwh == doctest::Approx(2.6));
  CHECK(sc.ess->initial_soc == doctest::Approx(0.75));
  const auto baseline = mpc::baseline_trajectory(sc);  // throws if infeasible
  CHECK(baseline.steps.size() == 24);
}

TEST_CASE("scenario resolution falls back to the bundled data directory") {
  const auto direct = scenario::resolve_scenario(
      (fs::path(FLEXCAP_SOURCE_DIR) / "data" / "bundled").string());
  CHECK(fs::exists(direct));
  CHECK_THROWS_AS((void)scenario::resolve_scenario("no_such_scenario_name"),
                  Error);
}
