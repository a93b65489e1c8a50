#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "flexcap/grid.hpp"
#include "flexcap/lp.hpp"
#include "flexcap/storage.hpp"

// LP builders for the hedging formulations. Naming scheme shared by all
// builders (t = absolute hour index):
//   variables  Pg_<gen>_t<t>   generator output, [0, capacity]
//              Pl_<load>_t<t>  load consumption, [min, max]
//              th_<bus>_t<t>   bus angle (radians), slack fixed at 0
//              fxr_<bus>_t<t>  required flexibility, [0, inf)   (quantify)
//              fxp_<bus>_t<t>  ESS discharge component, [0, P^flex_max]
//              fxn_<bus>_t<t>  ESS charge component,    [0, P^flex_max]
//              soc_<bus>_t<t>  stored energy after hour t, [0, capacity]
//   rows       bal_<bus>_t<t>    nodal balance: gen - load + flex - outflow = 0
//              chain_<bus>_t<t>  SoC recursion
//              flow_<f>_<t>_t<t>_{hi,lo}  line flow limits
// The dual of a balance row, negated, is the LMP a load pays at that bus.

namespace flexcap::market {

struct Generator {
  std::string id;
  std::string bus;
  double capacity_mw = 0.0;
  double cost = 0.0;  // EUR/MWh
};

struct Load {
  std::string id;
  std::string bus;
  double min_mw = 0.0;
  double max_mw = 0.0;
  double utility = 0.0;  // EUR/MWh
};

struct PriceCap {
  std::string bus;
  double cap = 0.0;  // EUR/MWh; +inf disables hedging at the bus
};

struct DispatchInputs {
  std::vector<Generator> generators;
  std::vector<Load> loads;
  std::vector<PriceCap> price_caps;

  const PriceCap* cap_for(std::string_view bus) const;
};

void validate_inputs(const DispatchInputs& inputs);

struct HedgeResult {
  std::map<std::string, double> flex_required;  // MW per constrained bus
  std::map<std::string, double> lmp;            // EUR/MWh per bus
  std::map<std::string, double> dispatch;       // MW per generator id
  std::map<std::string, double> consumption;    // MW per load id
  double objective = 0.0;
};

// Single-bus economic dispatch: maximize sum(b*P_L) - sum(a*P_G) subject to
// one system balance row (copper plate; placement is ignored without a
// network). Throws Error(empty_market) without at least one generator and
// one load.
lp::LinearProgram build_economic_dispatch(const DispatchInputs& inputs,
                                          int t = 0);

// Economic dispatch plus one non-negative, unbounded flexibility variable
// per capped bus, entering the balance with +1 and the objective with
// -cap. Throws Error(missing_price_cap) when no caps are given.
lp::LinearProgram build_hedged_dispatch(const DispatchInputs& inputs,
                                        int t = 0);

// Single-period DC-OPF with unbounded required flexibility at every
// price-constrained bus (quantification mode).
lp::LinearProgram build_hedged_opf_single(const grid::Network& network,
                                          const DispatchInputs& inputs, int t);

struct HorizonOptions {
  // Tiny deterministic penalty on |flex| so zero-value charge/discharge
  // cycles resolve to the idle schedule.
  double flex_penalty = 1e-7;
};

// Multi-period DC-OPF with storage-coupled flexibility at the ESS host bus
// (deliverability mode). steps[h] describes absolute hour start_hour + h.
// Flexibility is bounded by the power limit and chained through the SoC;
// discharge is positive.
lp::LinearProgram build_hedged_opf_horizon(const grid::Network& network,
                                           std::span<const DispatchInputs> steps,
                                           int start_hour,
                                           const storage::StorageState& state,
                                           const HorizonOptions& opts = {});

// LMP at (bus, step): the balance-row dual normalized so a price paid by
// loads is positive. Throws Error(no_such_row) if the row is absent.
double extract_lmp(const lp::LinearProgram& lp, const lp::Solution& sol,
                   std::string_view bus, int step);

// Convenience for the copper-plate builders: requires a unique balance row.
double extract_lmp(const lp::LinearProgram& lp, const lp::Solution& sol);

// Solves the single-period quantification LP and packages the result.
// Propagates Error(infeasible) / Error(unbounded) from the solver.
HedgeResult compute_flex_required(const grid::Network& network,
                                  const DispatchInputs& inputs, int t,
                                  const lp::SolverOptions& solver_opts = {});

}  // namespace flexcap::market
