#include "flexcap/market.hpp"

#include <cmath>
#include <string>

#include "flexcap/common.hpp"

namespace flexcap::market {

namespace {

std::string tsuf(int t) { return "_t" + std::to_string(t); }

// Accumulates the balance-row terms for one bus.
struct RowBuilder {
  std::vector<lp::Term> terms;
  void add(lp::VarId v, double c) { terms.push_back({v, c}); }
};

}  // namespace

const PriceCap* DispatchInputs::cap_for(std::string_view bus) const {
  for (const PriceCap& p : price_caps)
    if (p.bus == bus) return &p;
  return nullptr;
}

void validate_inputs(const DispatchInputs& inputs) {
  for (const Generator& g : inputs.generators) {
    if (!(g.capacity_mw >= 0.0) || !std::isfinite(g.capacity_mw))
      throw Error(Errc::validation_error,
                  "generator '" + g.id + "' needs a finite capacity >= 0");
    if (!std::isfinite(g.cost))
      throw Error(Errc::validation_error,
                  "generator '" + g.id + "' has non-finite cost");
  }
  for (const Load& l : inputs.loads) {
    if (!(l.min_mw <= l.max_mw) || !std::isfinite(l.max_mw) || l.min_mw < 0.0)
      throw Error(Errc::validation_error,
                  "load '" + l.id + "' has invalid bounds");
    if (!std::isfinite(l.utility))
      throw Error(Errc::validation_error,
                  "load '" + l.id + "' has non-finite utility");
  }
  for (const PriceCap& p : inputs.price_caps)
    if (!(p.cap > 0.0))
      throw Error(Errc::validation_error,
                  "price cap at '" + p.bus + "' must be positive");
}

namespace {

// Copper-plate dispatch shared by the plain and hedged builders. When every
// participant sits on the same bus the balance row carries that bus name,
// otherwise it is named for the whole system.
lp::LinearProgram build_dispatch(const DispatchInputs& inputs, int t,
                                 bool hedged) {
  validate_inputs(inputs);
  if (inputs.generators.empty() || inputs.loads.empty())
    throw Error(Errc::empty_market,
                "dispatch needs at least one generator and one load");
  if (hedged && inputs.price_caps.empty())
    throw Error(Errc::missing_price_cap, "hedged dispatch needs a price cap");

  std::string bus_name;
  bool single_bus = true;
  auto note_bus = [&](const std::string& b) {
    if (bus_name.empty())
      bus_name = b;
    else if (bus_name != b)
      single_bus = false;
  };
  for (const Generator& g : inputs.generators) note_bus(g.bus);
  for (const Load& l : inputs.loads) note_bus(l.bus);

  lp::LinearProgram prog(lp::Sense::maximize);
  RowBuilder bal;
  for (const Generator& g : inputs.generators) {
    const lp::VarId v =
        prog.add_variable("Pg_" + g.id + tsuf(t), 0.0, g.capacity_mw, -g.cost);
    bal.add(v, 1.0);
  }
  for (const Load& l : inputs.loads) {
    const lp::VarId v =
        prog.add_variable("Pl_" + l.id + tsuf(t), l.min_mw, l.max_mw, l.utility);
    bal.add(v, -1.0);
  }
  if (hedged) {
    for (const PriceCap& p : inputs.price_caps) {
      if (!std::isfinite(p.cap)) continue;  // infinite cap never binds
      const lp::VarId v =
          prog.add_variable("fxr_" + p.bus + tsuf(t), 0.0, lp::kInf, -p.cap);
      bal.add(v, 1.0);
    }
  }
  const std::string row =
      "bal_" + (single_bus && !bus_name.empty() ? bus_name : std::string("sys")) +
      tsuf(t);
  prog.add_constraint(row, std::move(bal.terms), lp::Relation::eq, 0.0);
  return prog;
}

}  // namespace

lp::LinearProgram build_economic_dispatch(const DispatchInputs& inputs, int t) {
  return build_dispatch(inputs, t, /*hedged=*/false);
}

lp::LinearProgram build_hedged_dispatch(const DispatchInputs& inputs, int t) {
  return build_dispatch(inputs, t, /*hedged=*/true);
}

namespace {

// Emits one period of the DC-OPF into `prog`: angle variables, generator and
// load variables, nodal balance rows and line-limit rows for hour t.
// `flex_terms[b]`, when non-null, receives extra terms to inject into bus
// b's balance row (flexreq or ESS flex variables added by the caller).
struct PeriodVars {
  std::vector<lp::VarId> theta;            // per bus
  std::vector<RowBuilder> balance;         // per bus
};

PeriodVars emit_period(lp::LinearProgram& prog, const grid::Network& net,
                       const DispatchInputs& inputs, int t) {
  const int nb = static_cast<int>(net.buses.size());
  PeriodVars pv;
  pv.theta.resize(nb);
  pv.balance.resize(nb);

  const int slack = net.slack_index();
  for (int b = 0; b < nb; ++b) {
    const bool is_slack = (b == slack);
    pv.theta[b] = prog.add_variable("th_" + net.buses[b].id + tsuf(t),
                                    is_slack ? 0.0 : -lp::kInf,
                                    is_slack ? 0.0 : lp::kInf, 0.0);
  }
  for (const Generator& g : inputs.generators) {
    const int b = net.bus_index(g.bus);
    if (b < 0)
      throw Error(Errc::validation_error,
                  "generator '" + g.id + "' on unknown bus '" + g.bus + "'");
    const lp::VarId v =
        prog.add_variable("Pg_" + g.id + tsuf(t), 0.0, g.capacity_mw, -g.cost);
    pv.balance[b].add(v, 1.0);
  }
  for (const Load& l : inputs.loads) {
    const int b = net.bus_index(l.bus);
    if (b < 0)
      throw Error(Errc::validation_error,
                  "load '" + l.id + "' on unknown bus '" + l.bus + "'");
    const lp::VarId v =
        prog.add_variable("Pl_" + l.id + tsuf(t), l.min_mw, l.max_mw, l.utility);
    pv.balance[b].add(v, -1.0);
  }

  // Line flows: (th_f - th_t)/X * base, subtracted from the from-bus balance
  // and added to the to-bus balance.
  for (const grid::Line& line : net.lines) {
    const int f = net.bus_index(line.from);
    const int to = net.bus_index(line.to);
    const double k = net.base_mva / line.reactance;
    pv.balance[f].add(pv.theta[f], -k);
    pv.balance[f].add(pv.theta[to], k);
    pv.balance[to].add(pv.theta[to], -k);
    pv.balance[to].add(pv.theta[f], k);
    if (std::isfinite(line.flow_limit)) {
      const std::string base = "flow_" + line.from + "_" + line.to + tsuf(t);
      prog.add_constraint(base + "_hi",
                          {{pv.theta[f], k}, {pv.theta[to], -k}},
                          lp::Relation::le, line.flow_limit);
      prog.add_constraint(base + "_lo",
                          {{pv.theta[f], k}, {pv.theta[to], -k}},
                          lp::Relation::ge, -line.flow_limit);
    }
  }
  return pv;
}

void close_balance_rows(lp::LinearProgram& prog, const grid::Network& net,
                        PeriodVars& pv, int t) {
  for (std::size_t b = 0; b < net.buses.size(); ++b)
    prog.add_constraint("bal_" + net.buses[b].id + tsuf(t),
                        std::move(pv.balance[b].terms), lp::Relation::eq, 0.0);
}

}  // namespace

lp::LinearProgram build_hedged_opf_single(const grid::Network& network,
                                          const DispatchInputs& inputs, int t) {
  grid::ensure_valid(network);
  validate_inputs(inputs);

  lp::LinearProgram prog(lp::Sense::maximize);
  PeriodVars pv = emit_period(prog, network, inputs, t);

  for (const int b : network.price_constrained_indices()) {
    const std::string& bus = network.buses[b].id;
    const PriceCap* cap = inputs.cap_for(bus);
    if (cap == nullptr)
      throw Error(Errc::missing_price_cap,
                  "no price cap for constrained bus '" + bus + "'");
    if (!std::isfinite(cap->cap)) continue;  // uncapped: plain OPF at this bus
    const lp::VarId v =
        prog.add_variable("fxr_" + bus + tsuf(t), 0.0, lp::kInf, -cap->cap);
    pv.balance[b].add(v, 1.0);
  }

  close_balance_rows(prog, network, pv, t);
  return prog;
}

lp::LinearProgram build_hedged_opf_horizon(const grid::Network& network,
                                           std::span<const DispatchInputs> steps,
                                           int start_hour,
                                           const storage::StorageState& state,
                                           const HorizonOptions& opts) {
  grid::ensure_valid(network);
  if (steps.empty())
    throw Error(Errc::validation_error, "horizon needs at least one step");
  storage::validate_spec(state.spec);

  const int host = network.bus_index(state.spec.host_bus);
  if (host < 0 || !network.buses[host].price_constrained)
    throw Error(Errc::missing_storage_host,
                "storage host '" + state.spec.host_bus +
                    "' is not a price-constrained bus");

  lp::LinearProgram prog(lp::Sense::maximize);
  const std::string& host_bus = network.buses[host].id;
  lp::VarId prev_soc = -1;

  for (std::size_t h = 0; h < steps.size(); ++h) {
    const int t = start_hour + static_cast<int>(h);
    validate_inputs(steps[h]);
    PeriodVars pv = emit_period(prog, network, steps[h], t);

    const PriceCap* cap = steps[h].cap_for(host_bus);
    if (cap == nullptr || !std::isfinite(cap->cap))
      throw Error(Errc::missing_price_cap,
                  "storage host '" + host_bus +
                      "' needs a finite price cap at hour " + std::to_string(t));

    const double pmax = state.spec.power_bound_mw;
    const lp::VarId fxp = prog.add_variable("fxp_" + host_bus + tsuf(t), 0.0,
                                            pmax, -cap->cap - opts.flex_penalty);
    const lp::VarId fxn = prog.add_variable("fxn_" + host_bus + tsuf(t), 0.0,
                                            pmax, cap->cap - opts.flex_penalty);
    pv.balance[host].add(fxp, 1.0);
    pv.balance[host].add(fxn, -1.0);

    const lp::VarId soc = prog.add_variable("soc_" + host_bus + tsuf(t), 0.0,
                                            state.spec.capacity_mwh, 0.0);
    // soc_t = soc_{t-1} - loss - flex
    std::vector<lp::Term> chain{{soc, 1.0}, {fxp, 1.0}, {fxn, -1.0}};
    double rhs = -state.spec.loss_mwh;
    if (prev_soc >= 0)
      chain.push_back({prev_soc, -1.0});
    else
      rhs += state.energy_mwh;
    prog.add_constraint("chain_" + host_bus + tsuf(t), std::move(chain),
                        lp::Relation::eq, rhs);
    prev_soc = soc;

    close_balance_rows(prog, network, pv, t);
  }
  return prog;
}

double extract_lmp(const lp::LinearProgram& lp, const lp::Solution& sol,
                   std::string_view bus, int step) {
  if (sol.status != lp::SolveStatus::optimal)
    throw Error(Errc::not_optimal, "LMP extraction requires an optimal solution");
  const std::string row = "bal_" + std::string(bus) + tsuf(step);
  const lp::RowId r = lp.find_constraint(row);
  if (r < 0) throw Error(Errc::no_such_row, "no balance row '" + row + "'");
  return -sol.duals[r];
}

double extract_lmp(const lp::LinearProgram& lp, const lp::Solution& sol) {
  if (sol.status != lp::SolveStatus::optimal)
    throw Error(Errc::not_optimal, "LMP extraction requires an optimal solution");
  lp::RowId found = -1;
  for (std::size_t i = 0; i < lp.num_constraints(); ++i) {
    if (lp.constraint(static_cast<lp::RowId>(i)).name.starts_with("bal_")) {
      if (found >= 0)
        throw Error(Errc::no_such_row,
                    "multiple balance rows; name the bus and step");
      found = static_cast<lp::RowId>(i);
    }
  }
  if (found < 0) throw Error(Errc::no_such_row, "no balance row in program");
  return -sol.duals[found];
}

HedgeResult compute_flex_required(const grid::Network& network,
                                  const DispatchInputs& inputs, int t,
                                  const lp::SolverOptions& solver_opts) {
  const lp::LinearProgram prog = build_hedged_opf_single(network, inputs, t);
  const lp::Solution sol = lp::solve(prog, solver_opts);
  if (sol.status == lp::SolveStatus::infeasible)
    throw Error(Errc::infeasible,
                "hedged OPF infeasible at hour " + std::to_string(t));
  if (sol.status == lp::SolveStatus::unbounded)
    throw Error(Errc::unbounded,
                "hedged OPF unbounded at hour " + std::to_string(t));

  HedgeResult res;
  res.objective = sol.objective;
  for (const int b : network.price_constrained_indices()) {
    const std::string& bus = network.buses[b].id;
    const lp::VarId v = prog.find_variable("fxr_" + bus + tsuf(t));
    res.flex_required[bus] = v >= 0 ? sol.primal[v] : 0.0;
  }
  for (const grid::Bus& bus : network.buses)
    res.lmp[bus.id] = extract_lmp(prog, sol, bus.id, t);
  for (const Generator& g : inputs.generators)
    res.dispatch[g.id] = lp::primal_value(prog, sol, "Pg_" + g.id + tsuf(t));
  for (const Load& l : inputs.loads)
    res.consumption[l.id] = lp::primal_value(prog, sol, "Pl_" + l.id + tsuf(t));
  return res;
}

}  // namespace flexcap::market
