#include "flexcap/mpc.hpp"

#include <algorithm>
#include <cmath>

namespace flexcap::mpc {

namespace {

std::string tsuf(int t) { return "_t" + std::to_string(t); }

// Pulls per-hour quantities out of an OPF solution for absolute hour t.
StepRecord make_record(const lp::LinearProgram& prog, const lp::Solution& sol,
                       const scenario::Scenario& sc, int t) {
  StepRecord rec;
  rec.hour = t;
  const grid::Network& net = sc.network;
  const int slack = net.slack_index();

  rec.lmp.reserve(net.buses.size());
  for (const grid::Bus& b : net.buses)
    rec.lmp.push_back(market::extract_lmp(prog, sol, b.id, t));

  for (const scenario::GeneratorSpec& g : sc.generators) {
    const double p = lp::primal_value(prog, sol, "Pg_" + g.id + tsuf(t));
    if (net.bus_index(g.bus) == slack)
      rec.import_trans += p;
    else
      rec.gen_dist += p;
  }
  for (const scenario::LoadSpec& l : sc.loads) {
    const int b = net.bus_index(l.bus);
    if (b < 0 || !net.buses[b].price_constrained) continue;
    const double served = lp::primal_value(prog, sol, "Pl_" + l.id + tsuf(t));
    rec.load_served += served;
    rec.step_cost += rec.lmp[b] * served;
  }
  return rec;
}

Trajectory empty_trajectory(const scenario::Scenario& sc) {
  Trajectory traj;
  for (const grid::Bus& b : sc.network.buses) traj.bus_ids.push_back(b.id);
  traj.constrained_bus = sc.constrained_bus();
  return traj;
}

}  // namespace

int Trajectory::bus_pos(std::string_view id) const {
  for (std::size_t i = 0; i < bus_ids.size(); ++i)
    if (bus_ids[i] == id) return static_cast<int>(i);
  return -1;
}

PlanResult plan_full(const scenario::Scenario& sc,
                     const storage::StorageState& state, int t, int horizon,
                     const PlanOptions& opts) {
  if (horizon < 1)
    throw Error(Errc::validation_error, "horizon must be >= 1");
  if (t < 1 || t > sc.horizon)
    throw Error(Errc::validation_error,
                "start hour " + std::to_string(t) + " outside scenario");

  const int eff = std::min(horizon, sc.horizon - t + 1);
  std::vector<market::DispatchInputs> window;
  window.reserve(eff);
  for (int h = 0; h < eff; ++h) window.push_back(sc.inputs_for(t + h));

  PlanResult res;
  res.start_hour = t;
  res.effective_horizon = eff;
  res.prog = market::build_hedged_opf_horizon(sc.network, window, t, state,
                                              opts.horizon);
  res.sol = lp::solve(res.prog, opts.solver);
  if (res.sol.status == lp::SolveStatus::infeasible)
    throw Error(Errc::infeasible,
                "horizon LP infeasible at hour " + std::to_string(t));
  if (res.sol.status == lp::SolveStatus::unbounded)
    throw Error(Errc::unbounded,
                "horizon LP unbounded at hour " + std::to_string(t));

  const std::string& host = state.spec.host_bus;
  res.flex.reserve(eff);
  for (int h = 0; h < eff; ++h) {
    const double p =
        lp::primal_value(res.prog, res.sol, "fxp_" + host + tsuf(t + h));
    const double n =
        lp::primal_value(res.prog, res.sol, "fxn_" + host + tsuf(t + h));
    res.flex.push_back(p - n);
  }
  return res;
}

std::vector<double> plan(const scenario::Scenario& sc,
                         const storage::StorageState& state, int t,
                         int horizon, const PlanOptions& opts) {
  return plan_full(sc, state, t, horizon, opts).flex;
}

Trajectory run_receding(const scenario::Scenario& sc,
                        const storage::StorageSpec& ess, int horizon,
                        const PlanOptions& opts) {
  scenario::validate(sc);
  Trajectory traj = empty_trajectory(sc);
  storage::StorageState state = storage::initial_state(ess);

  for (int t = 1; t <= sc.horizon; ++t) {
    PlanResult pr;
    try {
      pr = plan_full(sc, state, t, horizon, opts);
    } catch (const Error& e) {
      if (e.code() == Errc::infeasible) throw InfeasibleAtStep(t, traj);
      throw;
    }

    // Commit only the first step of the window.
    double flex = pr.flex.front();
    const storage::FlexBounds fb = storage::feasible_flex_bounds(state);
    flex = std::clamp(flex, fb.min_mw, fb.max_mw);  // shave LP roundoff

    StepRecord rec = make_record(pr.prog, pr.sol, sc, t);
    rec.flex = flex;
    state = storage::step_soc(state, flex);
    rec.soc = state.energy_mwh;
    traj.steps.push_back(std::move(rec));
  }
  return traj;
}

Trajectory baseline_trajectory(const scenario::Scenario& sc,
                               const PlanOptions& opts) {
  scenario::validate(sc);
  Trajectory traj = empty_trajectory(sc);
  for (int t = 1; t <= sc.horizon; ++t) {
    market::DispatchInputs in = sc.inputs_for(t);
    for (auto& cap : in.price_caps) cap.cap = lp::kInf;  // plain OPF
    const auto prog = market::build_hedged_opf_single(sc.network, in, t);
    const auto sol = lp::solve(prog, opts.solver);
    if (sol.status == lp::SolveStatus::infeasible)
      throw InfeasibleAtStep(t, traj);
    if (sol.status == lp::SolveStatus::unbounded)
      throw Error(Errc::unbounded,
                  "baseline OPF unbounded at hour " + std::to_string(t));
    StepRecord rec = make_record(prog, sol, sc, t);
    rec.flex = 0.0;
    rec.soc = 0.0;
    traj.steps.push_back(std::move(rec));
  }
  return traj;
}

double cost_per_mwh(const Trajectory& traj) {
  double cost = 0.0;
  double energy = 0.0;
  for (const StepRecord& s : traj.steps) {
    cost += s.step_cost;
    energy += s.load_served;
  }
  return energy > 0.0 ? cost / energy : 0.0;
}

SavingsReport savings(const std::map<int, Trajectory>& trajectories,
                      const Trajectory& baseline) {
  if (baseline.steps.empty())
    throw Error(Errc::incomplete_trajectory, "baseline trajectory is empty");
  for (const auto& [h, traj] : trajectories)
    if (traj.steps.size() != baseline.steps.size())
      throw Error(Errc::incomplete_trajectory,
                  "trajectory H=" + std::to_string(h) + " has " +
                      std::to_string(traj.steps.size()) + " steps, baseline " +
                      std::to_string(baseline.steps.size()));

  SavingsReport rep;
  rep.baseline_cost_per_mwh = cost_per_mwh(baseline);

  std::optional<double> myopic_cost;
  std::optional<double> myopic_saving;
  if (auto it = trajectories.find(1); it != trajectories.end()) {
    myopic_cost = cost_per_mwh(it->second);
    myopic_saving = rep.baseline_cost_per_mwh - *myopic_cost;
  }

  for (const auto& [h, traj] : trajectories) {
    SavingsEntry e;
    e.horizon = h;
    e.cost_per_mwh = cost_per_mwh(traj);
    e.saving_vs_baseline = rep.baseline_cost_per_mwh - e.cost_per_mwh;
    if (myopic_cost) {
      e.forecast_gain = *myopic_cost - e.cost_per_mwh;
      if (std::fabs(*myopic_saving) > 1e-12)
        e.forecast_gain_pct = *e.forecast_gain / *myopic_saving * 100.0;
    }
    rep.entries.push_back(e);
  }
  return rep;
}

double replay_soc_deviation(const Trajectory& traj,
                            const storage::StorageSpec& ess) {
  storage::StorageState state = storage::initial_state(ess);
  double worst = 0.0;
  for (const StepRecord& s : traj.steps) {
    state = storage::step_soc(state, s.flex);
    worst = std::max(worst, std::fabs(state.energy_mwh - s.soc));
  }
  return worst;
}

}  // namespace flexcap::mpc
