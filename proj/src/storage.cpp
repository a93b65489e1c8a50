#include "flexcap/storage.hpp"

#include <algorithm>
#include <cmath>

#include "flexcap/common.hpp"

namespace flexcap::storage {

namespace {
constexpr double kSocTol = 1e-9;
}

void validate_spec(const StorageSpec& spec) {
  if (spec.capacity_mwh < 0.0 || std::isnan(spec.capacity_mwh))
    throw Error(Errc::validation_error, "storage capacity must be >= 0");
  if (spec.power_bound_mw < 0.0 || std::isnan(spec.power_bound_mw))
    throw Error(Errc::validation_error, "storage power bound must be >= 0");
  if (spec.loss_mwh < 0.0 || std::isnan(spec.loss_mwh))
    throw Error(Errc::validation_error, "storage loss must be >= 0");
  if (!(spec.initial_soc >= 0.0 && spec.initial_soc <= 1.0))
    throw Error(Errc::validation_error, "initial SoC must lie in [0, 1]");
}

StorageState initial_state(const StorageSpec& spec) {
  validate_spec(spec);
  return StorageState{spec, spec.initial_soc * spec.capacity_mwh};
}

StorageState step_soc(const StorageState& state, double flex_mw) {
  const double next = state.energy_mwh - state.spec.loss_mwh - flex_mw;
  if (next < -kSocTol || next > state.spec.capacity_mwh + kSocTol)
    throw Error(Errc::soc_violation,
                "flex " + std::to_string(flex_mw) + " MW drives SoC to " +
                    std::to_string(next) + " MWh outside [0, " +
                    std::to_string(state.spec.capacity_mwh) + "]");
  StorageState out = state;
  out.energy_mwh = std::clamp(next, 0.0, state.spec.capacity_mwh);
  return out;
}

FlexBounds feasible_flex_bounds(const StorageState& state) {
  const StorageSpec& s = state.spec;
  const double after_loss = state.energy_mwh - s.loss_mwh;
  const double max_mw = std::min(s.power_bound_mw, after_loss);
  const double min_mw = std::max(-s.power_bound_mw, after_loss - s.capacity_mwh);
  if (min_mw > max_mw + kSocTol)
    throw Error(Errc::stranded,
                "standing loss exceeds stored energy plus full-power charge");
  return FlexBounds{std::min(min_mw, max_mw), max_mw};
}

}  // namespace flexcap::storage
