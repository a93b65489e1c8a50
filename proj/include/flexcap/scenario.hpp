#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "flexcap/grid.hpp"
#include "flexcap/market.hpp"
#include "flexcap/storage.hpp"

namespace flexcap::scenario {

enum class PriceSeries { trans, dist };

struct GeneratorSpec {
  std::string id;
  std::string bus;
  double capacity_mw = 0.0;
  PriceSeries price = PriceSeries::trans;
};

struct LoadSpec {
  std::string id;
  std::string bus;
};

// A 24-step (configurable) day: topology plus hourly price/demand series.
// File layout: <dir>/scenario.json for topology and device specs,
// referencing a series CSV with exact columns
//   hour,a_trans,a_dist,b_load,demand_lo,demand_hi
struct Scenario {
  std::string name;
  int horizon = 24;
  grid::Network network;
  std::vector<GeneratorSpec> generators;
  std::vector<LoadSpec> loads;
  std::vector<double> a_trans;    // EUR/MWh, wholesale import price
  std::vector<double> a_dist;     // EUR/MWh, distributed generation price
  std::vector<double> b_load;     // EUR/MWh, load utility
  std::vector<double> demand_lo;  // MW
  std::vector<double> demand_hi;  // MW
  std::vector<double> pi_des;     // EUR/MWh, price cap series
  std::optional<storage::StorageSpec> ess;

  // Market inputs for absolute hour t in 1..horizon.
  market::DispatchInputs inputs_for(int t) const;
  std::string constrained_bus() const;  // first price-constrained bus
};

// Hard invariants: series lengths, valid network, sane device references.
// Throws Error(validation_error).
void validate(const Scenario& sc);

// Soft invariants (a_dist < a_trans everywhere, b_load > pi_des): returned
// as human-readable warnings; hard errors in strict mode.
std::vector<std::string> soft_checks(const Scenario& sc);

Scenario load_scenario(const std::filesystem::path& file, bool strict = false,
                       std::vector<std::string>* warnings = nullptr);
void save_scenario(const Scenario& sc, const std::filesystem::path& dir);

struct SynthTargets {
  // 1-based hours whose uncapped LMP must exceed the cap; all other hours
  // must stay below it.
  std::vector<int> hours_above_cap = {9, 10, 11, 12, 13, 18, 19, 20};
  double pi_des = 75.0;
};

// Deterministic 3-bus day shaped like an APX trading day: cheap distributed
// generation, a wholesale price with midday and evening peaks, and a demand
// profile that always exceeds the distributed capacity. The synthesis
// re-solves the uncapped OPF for every hour and throws
// Error(calibration_failed) if the target hour set is not reproduced.
Scenario synthesize_apx_like(std::uint64_t seed, const SynthTargets& targets = {});

// Resolves a scenario argument: an existing file path is used as given;
// otherwise the name is looked up under $FLEXCAP_SCENARIO_DIR and then the
// bundled data directory.
std::filesystem::path resolve_scenario(const std::string& name_or_path);

}  // namespace flexcap::scenario
