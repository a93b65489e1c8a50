#include "flexcap/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <iostream>
#include <map>
#include <sstream>

#include "flexcap/mpc.hpp"
#include "flexcap/report.hpp"

namespace flexcap::cli {

namespace {

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::infeasible:
      return kExitInfeasible;
    case Errc::parse_error:
    case Errc::validation_error:
    case Errc::calibration_failed:
    case Errc::missing_price_cap:
    case Errc::missing_storage_host:
      return kExitInvalid;
    default:
      return kExitError;
  }
}

template <typename Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
}

storage::StorageSpec effective_ess(const scenario::Scenario& sc,
                                   const RunConfig& cfg) {
  storage::StorageSpec spec;
  if (sc.ess)
    spec = *sc.ess;
  else
    spec.host_bus = sc.constrained_bus();
  if (cfg.ess_capacity) spec.capacity_mwh = *cfg.ess_capacity;
  if (cfg.ess_power) spec.power_bound_mw = *cfg.ess_power;
  if (cfg.ess_loss) spec.loss_mwh = *cfg.ess_loss;
  if (cfg.ess_initial_soc) spec.initial_soc = *cfg.ess_initial_soc;
  storage::validate_spec(spec);
  return spec;
}

int count_cap_violations(const mpc::Trajectory& traj,
                         const std::vector<double>& pi_des) {
  const int k = traj.bus_pos(traj.constrained_bus);
  if (k < 0) return 0;
  int n = 0;
  for (std::size_t t = 0; t < traj.steps.size(); ++t)
    if (traj.steps[t].lmp[k] > pi_des[t] + 1e-6) ++n;
  return n;
}

}  // namespace

scenario::Scenario load_with_overrides(const RunConfig& cfg) {
  const auto path = scenario::resolve_scenario(cfg.scenario);
  std::vector<std::string> warnings;
  scenario::Scenario sc = scenario::load_scenario(path, cfg.strict, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  if (cfg.pi_des) {
    if (!(*cfg.pi_des > 0.0))
      throw Error(Errc::validation_error, "--pi-des must be positive");
    sc.pi_des.assign(sc.horizon, *cfg.pi_des);
  }
  if (cfg.ess_capacity || cfg.ess_power || cfg.ess_loss || cfg.ess_initial_soc)
    sc.ess = effective_ess(sc, cfg);
  scenario::validate(sc);
  return sc;
}

int cmd_run(const RunConfig& cfg) {
  return guarded([&]() -> int {
    scenario::Scenario sc = load_with_overrides(cfg);
    if (cfg.horizons.empty())
      throw Error(Errc::validation_error, "need at least one horizon");
    for (int h : cfg.horizons)
      if (h < 1) throw Error(Errc::validation_error, "horizons must be >= 1");

    const storage::StorageSpec ess = effective_ess(sc, cfg);
    mpc::PlanOptions opts;
    opts.solver.exec = kernels::Exec::serial;  // points below kernel cutoff

    const mpc::Trajectory baseline = mpc::baseline_trajectory(sc, opts);

    const int n = static_cast<int>(cfg.horizons.size());
    std::vector<mpc::Trajectory> runs(n);
    std::vector<std::exception_ptr> errors(n);
    const bool par = cfg.exec != kernels::Exec::serial;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
    for (int i = 0; i < n; ++i) {
      try {
        runs[i] = mpc::run_receding(sc, ess, cfg.horizons[i], opts);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    (void)par;
    for (int i = 0; i < n; ++i)
      if (errors[i]) std::rethrow_exception(errors[i]);

    report::write_trajectory_csv(cfg.out_dir / "baseline.csv", baseline);
    std::map<int, mpc::Trajectory> by_h;
    for (int i = 0; i < n; ++i) {
      report::write_trajectory_csv(
          cfg.out_dir /
              ("trajectory_h" + std::to_string(cfg.horizons[i]) + ".csv"),
          runs[i]);
      by_h.emplace(cfg.horizons[i], std::move(runs[i]));
    }

    const mpc::SavingsReport rep = mpc::savings(by_h, baseline);
    if (cfg.emit == RunConfig::Emit::json)
      report::write_text_atomic(cfg.out_dir / "summary.json",
                                report::savings_json(rep, sc.name));
    else
      report::write_text_atomic(cfg.out_dir / "summary.csv",
                                report::savings_csv(rep));

    std::printf("scenario %s: baseline %.2f EUR/MWh\n", sc.name.c_str(),
                rep.baseline_cost_per_mwh);
    for (const auto& e : rep.entries) {
      std::printf("  H=%d cost %.2f saving %.2f", e.horizon, e.cost_per_mwh,
                  e.saving_vs_baseline);
      if (e.forecast_gain)
        std::printf(" forecast gain %.2f (%.1f%%)", *e.forecast_gain,
                    e.forecast_gain_pct ? *e.forecast_gain_pct : 0.0);
      std::printf("\n");
    }
    return kExitOk;
  });
}

int cmd_quantify(const RunConfig& cfg) {
  return guarded([&]() -> int {
    scenario::Scenario sc = load_with_overrides(cfg);
    const std::string kbus = sc.constrained_bus();

    std::ostringstream csv;
    csv << "hour,lmp_uncapped,flex_required,lmp_hedged\n";
    for (int t = 1; t <= sc.horizon; ++t) {
      market::DispatchInputs in = sc.inputs_for(t);
      market::DispatchInputs uncapped = in;
      for (auto& c : uncapped.price_caps) c.cap = lp::kInf;
      const auto base = market::compute_flex_required(sc.network, uncapped, t);
      const auto hedged = market::compute_flex_required(sc.network, in, t);
      csv << t << ',' << report::fmt(base.lmp.at(kbus)) << ','
          << report::fmt(hedged.flex_required.at(kbus)) << ','
          << report::fmt(hedged.lmp.at(kbus)) << "\n";
    }
    report::write_text_atomic(cfg.out_dir / "flex_required.csv", csv.str());
    std::printf("wrote %s\n",
                (cfg.out_dir / "flex_required.csv").string().c_str());
    return kExitOk;
  });
}

std::vector<SweepRow> compute_sweep(const scenario::Scenario& base,
                                    const std::string& parameter,
                                    std::span<const double> values,
                                    int horizon, kernels::Exec exec) {
  if (values.empty())
    throw Error(Errc::validation_error, "sweep needs a non-empty grid");
  if (parameter != "ess-capacity" && parameter != "horizon" &&
      parameter != "pi-des")
    throw Error(Errc::validation_error,
                "unknown sweep parameter '" + parameter +
                    "' (ess-capacity|horizon|pi-des)");

  mpc::PlanOptions opts;
  opts.solver.exec = kernels::Exec::serial;
  const mpc::Trajectory baseline = mpc::baseline_trajectory(base, opts);
  const double baseline_cost = mpc::cost_per_mwh(baseline);

  const int n = static_cast<int>(values.size());
  std::vector<SweepRow> rows(n);
  std::vector<std::exception_ptr> errors(n);
  const bool par =
      exec == kernels::Exec::parallel || exec == kernels::Exec::automatic;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) if (par)
#endif
  for (int i = 0; i < n; ++i) {
    try {
      scenario::Scenario sc = base;
      int h = horizon;
      if (parameter == "ess-capacity") {
        if (!sc.ess)
          throw Error(Errc::validation_error, "scenario has no storage");
        sc.ess->capacity_mwh = values[i];
      } else if (parameter == "pi-des") {
        sc.pi_des.assign(sc.horizon, values[i]);
      } else {
        h = static_cast<int>(values[i]);
        if (h < 1)
          throw Error(Errc::validation_error, "horizon values must be >= 1");
      }
      storage::StorageSpec ess =
          sc.ess ? *sc.ess
                 : storage::StorageSpec{sc.constrained_bus(), 0, 0, 0, 0};
      const mpc::Trajectory traj = mpc::run_receding(sc, ess, h, opts);
      SweepRow row;
      row.value = values[i];
      row.cost_per_mwh = mpc::cost_per_mwh(traj);
      row.saving_vs_baseline = baseline_cost - row.cost_per_mwh;
      row.cap_violated_hours = count_cap_violations(traj, sc.pi_des);
      rows[i] = row;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  (void)par;
  for (int i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
  return rows;
}

int cmd_sweep(const RunConfig& cfg, const std::string& parameter,
              const std::vector<double>& values) {
  return guarded([&]() -> int {
    scenario::Scenario sc = load_with_overrides(cfg);
    const int h = cfg.horizons.empty() ? 1 : cfg.horizons.front();
    const auto rows = compute_sweep(sc, parameter, values, h, cfg.exec);

    std::ostringstream csv;
    csv << parameter
        << ",cost_per_mwh,saving_vs_baseline,cap_violated_hours\n";
    for (const SweepRow& r : rows)
      csv << report::fmt(r.value) << ',' << report::fmt(r.cost_per_mwh) << ','
          << report::fmt(r.saving_vs_baseline) << ',' << r.cap_violated_hours
          << "\n";
    const auto path = cfg.out_dir / ("sweep_" + parameter + ".csv");
    report::write_text_atomic(path, csv.str());
    std::printf("wrote %s (%zu points)\n", path.string().c_str(), rows.size());
    return kExitOk;
  });
}

int cmd_validate(const RunConfig& cfg) {
  return guarded([&]() -> int {
    const auto path = scenario::resolve_scenario(cfg.scenario);
    std::vector<std::string> warnings;
    const scenario::Scenario sc =
        scenario::load_scenario(path, cfg.strict, &warnings);
    for (const std::string& w : warnings)
      std::printf("warning: %s\n", w.c_str());
    std::printf("ok: scenario '%s', %d hours, %zu buses, %zu lines%s\n",
                sc.name.c_str(), sc.horizon, sc.network.buses.size(),
                sc.network.lines.size(), sc.ess ? ", storage" : "");
    return kExitOk;
  });
}

}  // namespace flexcap::cli
