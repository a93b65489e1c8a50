#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "flexcap/cli.hpp"
#include "flexcap/mpc.hpp"
#include "flexcap/report.hpp"

using namespace flexcap;
namespace fs = std::filesystem;

namespace {

fs::path bundled_path() {
  return fs::path(FLEXCAP_SOURCE_DIR) / "data" / "bundled";
}

fs::path out_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("flexcap_cli_" + tag);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

cli::RunConfig base_config(const std::string& tag) {
  cli::RunConfig cfg;
  cfg.scenario = bundled_path().string();
  cfg.out_dir = out_dir(tag);
  return cfg;
}

}  // namespace

TEST_CASE("cmd_run writes one CSV per horizon plus baseline and summary") {
  auto cfg = base_config("run");
  cfg.horizons = {1, 6, 8};
  REQUIRE(cli::cmd_run(cfg) == cli::kExitOk);
  for (const char* f :
       {"baseline.csv", "trajectory_h1.csv", "trajectory_h6.csv",
        "trajectory_h8.csv", "summary.json"})
    CHECK(fs::exists(cfg.out_dir / f));

  // Re-loaded trajectories satisfy the SoC replay invariant and hold the
  // cap during the expensive hours.
  const auto sc = cli::load_with_overrides(cfg);
  for (int h : {1, 6, 8}) {
    const auto traj = report::read_trajectory_csv(
        cfg.out_dir / ("trajectory_h" + std::to_string(h) + ".csv"));
    REQUIRE(traj.steps.size() == 24);
    CHECK(mpc::replay_soc_deviation(traj, *sc.ess) <= 1e-9);
    const int k = traj.bus_pos("bus3");
    REQUIRE(k >= 0);
    for (int t : {9, 10, 11, 12, 13, 18, 19, 20})
      CHECK(traj.steps[t - 1].lmp[k] <= 75.0 + 1e-6);
  }
}

TEST_CASE("cmd_run output is byte-deterministic") {
  auto cfg1 = base_config("det1");
  auto cfg2 = base_config("det2");
  cfg1.horizons = cfg2.horizons = {1, 6};
  REQUIRE(cli::cmd_run(cfg1) == cli::kExitOk);
  REQUIRE(cli::cmd_run(cfg2) == cli::kExitOk);
  for (const char* f : {"baseline.csv", "trajectory_h1.csv",
                        "trajectory_h6.csv", "summary.json"})
    CHECK(slurp(cfg1.out_dir / f) == slurp(cfg2.out_dir / f));
}

TEST_CASE("zero-capacity override reproduces the baseline trajectory") {
  auto cfg = base_config("null_ess");
  cfg.horizons = {6};
  cfg.ess_capacity = 0.0;
  cfg.ess_initial_soc = 0.0;
  REQUIRE(cli::cmd_run(cfg) == cli::kExitOk);
  const auto base = report::read_trajectory_csv(cfg.out_dir / "baseline.csv");
  const auto traj =
      report::read_trajectory_csv(cfg.out_dir / "trajectory_h6.csv");
  REQUIRE(base.steps.size() == traj.steps.size());
  for (std::size_t t = 0; t < base.steps.size(); ++t)
    for (std::size_t b = 0; b < base.bus_ids.size(); ++b)
      CHECK(std::fabs(base.steps[t].lmp[b] - traj.steps[t].lmp[b]) <= 1e-9);
}

TEST_CASE("a sky-high cap never binds") {
  // With the cap far above every price the ESS never discharges (stored
  // energy is worth more than any hour saves) and the uncongested LMPs
  // match the uncapped series; the one-off top-up charge does not move
  // marginal prices.
  auto cfg = base_config("high_cap");
  cfg.horizons = {1};
  cfg.pi_des = 1000.0;
  REQUIRE(cli::cmd_run(cfg) == cli::kExitOk);
  const auto base = report::read_trajectory_csv(cfg.out_dir / "baseline.csv");
  const auto traj =
      report::read_trajectory_csv(cfg.out_dir / "trajectory_h1.csv");
  for (std::size_t t = 0; t < base.steps.size(); ++t) {
    CHECK(traj.steps[t].flex <= 1e-7);  // no discharge, ever
    for (std::size_t b = 0; b < base.bus_ids.size(); ++b)
      CHECK(std::fabs(base.steps[t].lmp[b] - traj.steps[t].lmp[b]) <= 1e-6);
  }
}

TEST_CASE("cmd_quantify flags exactly the expensive hours") {
  auto cfg = base_config("quantify");
  REQUIRE(cli::cmd_quantify(cfg) == cli::kExitOk);
  std::ifstream in(cfg.out_dir / "flex_required.csv");
  std::string line;
  std::getline(in, line);
  CHECK(line == "hour,lmp_uncapped,flex_required,lmp_hedged");
  const std::vector<int> expect{9, 10, 11, 12, 13, 18, 19, 20};
  int hour = 0;
  while (std::getline(in, line)) {
    ++hour;
    const auto c2 = line.find(',', line.find(',') + 1);
    const double flexreq = std::stod(line.substr(c2 + 1));
    const bool expected =
        std::find(expect.begin(), expect.end(), hour) != expect.end();
    CHECK((flexreq > 1e-6) == expected);
  }
  CHECK(hour == 24);
}

TEST_CASE("cmd_quantify cap extremes") {
  auto low = base_config("quantify_low");
  low.pi_des = 10.0;  // below every generation cost
  REQUIRE(cli::cmd_quantify(low) == cli::kExitOk);
  std::ifstream in(low.out_dir / "flex_required.csv");
  std::string line;
  std::getline(in, line);
  int positive = 0, hours = 0;
  while (std::getline(in, line)) {
    ++hours;
    const auto c2 = line.find(',', line.find(',') + 1);
    if (std::stod(line.substr(c2 + 1)) > 1e-6) ++positive;
  }
  CHECK(hours == 24);
  CHECK(positive == 24);

  auto high = base_config("quantify_high");
  high.pi_des = 1000.0;
  REQUIRE(cli::cmd_quantify(high) == cli::kExitOk);
  std::ifstream in2(high.out_dir / "flex_required.csv");
  std::getline(in2, line);
  positive = 0;
  while (std::getline(in2, line)) {
    const auto c2 = line.find(',', line.find(',') + 1);
    if (std::stod(line.substr(c2 + 1)) > 1e-6) ++positive;
  }
  CHECK(positive == 0);
}

TEST_CASE("capacity sweep never increases the count of violated hours") {
  auto cfg = base_config("sweep_cap");
  const auto sc = cli::load_with_overrides(cfg);
  const std::vector<double> caps{0.0, 0.5, 1.0, 2.0, 3.5, 5.0};
  const auto rows =
      cli::compute_sweep(sc, "ess-capacity", caps, 1, kernels::Exec::serial);
  REQUIRE(rows.size() == caps.size());
  for (std::size_t i = 1; i < rows.size(); ++i)
    CHECK(rows[i].cap_violated_hours <= rows[i - 1].cap_violated_hours);
  CHECK(rows.front().cap_violated_hours == 8);  // no storage: all 8 peaks
}

TEST_CASE("horizon sweep: forecasts never hurt on the bundled day") {
  auto cfg = base_config("sweep_h");
  const auto sc = cli::load_with_overrides(cfg);
  const std::vector<double> hs{1, 6, 8};
  const auto rows =
      cli::compute_sweep(sc, "horizon", hs, 1, kernels::Exec::serial);
  CHECK(rows[1].cost_per_mwh <= rows[0].cost_per_mwh + 1e-9);
  CHECK(rows[2].cost_per_mwh <= rows[0].cost_per_mwh + 1e-9);
  // On this calibrated day the H=6 run edges out H=8: the longer window
  // hoards energy more conservatively near the evening peak. This ordering
  // is scenario-specific, so it is only asserted for the bundled data.
  CHECK(rows[1].cost_per_mwh <= rows[2].cost_per_mwh + 1e-9);
}

TEST_CASE("parallel and serial sweeps agree exactly") {
  auto cfg = base_config("sweep_par");
  const auto sc = cli::load_with_overrides(cfg);
  const std::vector<double> caps{0.0, 1.0, 2.6, 4.0};
  const auto serial =
      cli::compute_sweep(sc, "ess-capacity", caps, 1, kernels::Exec::serial);
  const auto parallel =
      cli::compute_sweep(sc, "ess-capacity", caps, 1, kernels::Exec::parallel);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].cost_per_mwh == parallel[i].cost_per_mwh);
    CHECK(serial[i].cap_violated_hours == parallel[i].cap_violated_hours);
  }
}

TEST_CASE("single-point sweep and argument validation") {
  auto cfg = base_config("sweep_one");
  const auto sc = cli::load_with_overrides(cfg);
  const std::vector<double> one{2.6};
  CHECK(cli::compute_sweep(sc, "ess-capacity", one, 1, kernels::Exec::serial)
            .size() == 1);
  CHECK_THROWS_AS((void)cli::compute_sweep(sc, "voltage", one, 1,
                                           kernels::Exec::serial),
                  Error);
  CHECK_THROWS_AS(
      (void)cli::compute_sweep(sc, "horizon", {}, 1, kernels::Exec::serial),
      Error);
}

TEST_CASE("exit codes for bad inputs") {
  cli::RunConfig bad;
  bad.scenario = "/definitely/not/here.json";
  CHECK(cli::cmd_validate(bad) == cli::kExitInvalid);
  CHECK(cli::cmd_run(bad) == cli::kExitInvalid);

  auto cfg = base_config("validate_ok");
  CHECK(cli::cmd_validate(cfg) == cli::kExitOk);
}

TEST_CASE("an unservable hour exits with the infeasible code") {
  auto sc = scenario::load_scenario(bundled_path() / "scenario.json");
  sc.demand_lo[11] = sc.demand_hi[11] = 500.0;
  const auto dir = out_dir("infeasible_scen");
  scenario::save_scenario(sc, dir);

  cli::RunConfig cfg;
  cfg.scenario = dir.string();
  cfg.out_dir = out_dir("infeasible_out");
  cfg.horizons = {1};
  CHECK(cli::cmd_run(cfg) == cli::kExitInfeasible);
}

TEST_CASE("csv summary emission") {
  auto cfg = base_config("emit_csv");
  cfg.horizons = {1};
  cfg.emit = cli::RunConfig::Emit::csv;
  REQUIRE(cli::cmd_run(cfg) == cli::kExitOk);
  std::ifstream in(cfg.out_dir / "summary.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header ==
        "H,cost_per_mwh,saving_vs_baseline,forecast_gain,forecast_gain_pct");
}
