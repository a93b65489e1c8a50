#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "flexcap/common.hpp"
#include "flexcap/lp.hpp"
#include "flexcap/market.hpp"
#include "flexcap/scenario.hpp"
#include "flexcap/storage.hpp"

namespace flexcap::mpc {

struct StepRecord {
  int hour = 0;
  std::vector<double> lmp;   // EUR/MWh, aligned with Trajectory::bus_ids
  double flex = 0.0;         // committed ESS flex, MW (discharge positive)
  double soc = 0.0;          // stored energy after the step, MWh
  double import_trans = 0.0; // slack-bus generation, MW
  double gen_dist = 0.0;     // generation at all other buses, MW
  double load_served = 0.0;  // load at price-constrained buses, MW
  double step_cost = 0.0;    // EUR paid at constrained buses this hour
};

struct Trajectory {
  std::vector<std::string> bus_ids;
  std::string constrained_bus;
  std::vector<StepRecord> steps;

  int bus_pos(std::string_view id) const;
};

// Receding-horizon infeasibility carries the failing hour and everything
// committed before it.
class InfeasibleAtStep : public Error {
 public:
  InfeasibleAtStep(int hour, Trajectory partial)
      : Error(Errc::infeasible,
              "horizon LP infeasible at hour " + std::to_string(hour)),
        hour(hour),
        partial(std::move(partial)) {}

  int hour;
  Trajectory partial;
};

struct PlanOptions {
  market::HorizonOptions horizon;
  lp::SolverOptions solver;
};

struct PlanResult {
  int start_hour = 0;
  int effective_horizon = 0;          // truncated at the scenario end
  std::vector<double> flex;           // per step of the window
  lp::LinearProgram prog;
  lp::Solution sol;
};

// Plans ESS operation over hours [t, t + H - 1] clamped to the scenario
// end, from the given storage state. Throws Error(infeasible) if the
// window LP has no feasible point.
PlanResult plan_full(const scenario::Scenario& sc,
                     const storage::StorageState& state, int t, int horizon,
                     const PlanOptions& opts = {});
std::vector<double> plan(const scenario::Scenario& sc,
                         const storage::StorageState& state, int t,
                         int horizon, const PlanOptions& opts = {});

// Receding-horizon loop over the whole scenario: plan, commit the first
// step, advance the SoC, repeat. LMPs are the committed step's balance-row
// duals of the planning LP, so prices reflect the committed action.
Trajectory run_receding(const scenario::Scenario& sc,
                        const storage::StorageSpec& ess, int horizon,
                        const PlanOptions& opts = {});

// Reference trajectory without any ESS or flexibility (plain OPF per hour).
Trajectory baseline_trajectory(const scenario::Scenario& sc,
                               const PlanOptions& opts = {});

// Energy-weighted price at the constrained buses over the trajectory.
double cost_per_mwh(const Trajectory& traj);

struct SavingsEntry {
  int horizon = 0;
  double cost_per_mwh = 0.0;
  double saving_vs_baseline = 0.0;        // baseline - cost
  std::optional<double> forecast_gain;    // cost(H=1) - cost(H)
  std::optional<double> forecast_gain_pct;// gain / saving(H=1) * 100
};

struct SavingsReport {
  double baseline_cost_per_mwh = 0.0;
  std::vector<SavingsEntry> entries;  // ordered by horizon
};

// Forecast gains are reported relative to the H=1 entry when present.
// Throws Error(incomplete_trajectory) when lengths differ from baseline.
SavingsReport savings(const std::map<int, Trajectory>& trajectories,
                      const Trajectory& baseline);

// Replays the committed flex through step_soc and checks the recorded SoC
// path; returns the maximum absolute deviation (0 for an exact replay).
double replay_soc_deviation(const Trajectory& traj,
                            const storage::StorageSpec& ess);

}  // namespace flexcap::mpc
