#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "flexcap/kernels.hpp"
#include "flexcap/scenario.hpp"

namespace flexcap::cli {

// Exit code contract: 0 success, 2 parse/validation failure, 3 infeasible.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitInvalid = 2;
inline constexpr int kExitInfeasible = 3;

struct RunConfig {
  std::string scenario = "bundled";
  std::vector<int> horizons = {1, 6, 8};
  std::optional<double> pi_des;
  std::optional<double> ess_capacity;
  std::optional<double> ess_initial_soc;
  std::optional<double> ess_power;
  std::optional<double> ess_loss;
  std::filesystem::path out_dir = "out";
  enum class Emit { csv, json };
  Emit emit = Emit::json;
  bool strict = false;
  kernels::Exec exec = kernels::Exec::automatic;
};

// Loads, applies overrides and validates; prints soft warnings to stderr.
scenario::Scenario load_with_overrides(const RunConfig& cfg);

// MPC runs for every configured horizon plus the no-ESS baseline; writes
// baseline.csv, trajectory_h<H>.csv and summary.(json|csv) under out_dir.
int cmd_run(const RunConfig& cfg);

// Per-hour required flexibility ignoring ESS limits; writes
// flex_required.csv (hour,lmp_uncapped,flex_required,lmp_hedged).
int cmd_quantify(const RunConfig& cfg);

struct SweepRow {
  double value = 0.0;
  double cost_per_mwh = 0.0;
  double saving_vs_baseline = 0.0;
  int cap_violated_hours = 0;
};

// Grid evaluation over one parameter; points run independently and in
// parallel under Exec::parallel/automatic. Results are ordered by `values`
// regardless of scheduling.
std::vector<SweepRow> compute_sweep(const scenario::Scenario& base,
                                    const std::string& parameter,
                                    std::span<const double> values,
                                    int horizon, kernels::Exec exec);

// parameter: ess-capacity | horizon | pi-des. Writes sweep_<parameter>.csv.
int cmd_sweep(const RunConfig& cfg, const std::string& parameter,
              const std::vector<double>& values);

int cmd_validate(const RunConfig& cfg);

}  // namespace flexcap::cli
