#pragma once

#include <string>

namespace flexcap::storage {

// One ESS per scenario, hosted at a price-constrained bus. Hourly steps,
// unit charge/discharge efficiency; a fixed per-step standing loss.
struct StorageSpec {
  std::string host_bus;
  double capacity_mwh = 0.0;     // b^max
  double power_bound_mw = 0.0;   // symmetric charge/discharge limit per step
  double loss_mwh = 0.0;         // standing loss drained every step
  double initial_soc = 0.0;      // fraction of capacity in [0, 1]
};

struct StorageState {
  StorageSpec spec;
  double energy_mwh = 0.0;  // current stored energy in [0, capacity]
};

StorageState initial_state(const StorageSpec& spec);

// Throws Error(validation_error) on negative capacity/power/loss or an
// initial SoC outside [0, 1].
void validate_spec(const StorageSpec& spec);

// Advances one hour: energy' = energy - loss - flex (positive flex is a
// discharge). Throws Error(soc_violation) if the result leaves
// [0, capacity] by more than 1e-9.
StorageState step_soc(const StorageState& state, double flex_mw);

struct FlexBounds {
  double min_mw = 0.0;  // most negative (deepest charge) admissible flex
  double max_mw = 0.0;  // largest discharge admissible
};

// Flex interval feasible for the coming step given power bound, capacity
// headroom and standing loss. Throws Error(stranded) when even a full-power
// charge cannot keep the SoC non-negative.
FlexBounds feasible_flex_bounds(const StorageState& state);

}  // namespace flexcap::storage
