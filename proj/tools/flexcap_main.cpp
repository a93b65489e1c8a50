// flexcap: quantify the demand-side flexibility that caps locational
// marginal prices at a consumer's willingness to pay, and verify that an
// ESS under receding-horizon control can deliver it over a day.

#include <string>
#include <vector>

#include <CLI11.hpp>

#include "flexcap/cli.hpp"

namespace {

void add_common(CLI::App* cmd, flexcap::cli::RunConfig& cfg) {
  cmd->add_option("--scenario", cfg.scenario,
                  "scenario file/directory or bundled name");
  cmd->add_option("--out", cfg.out_dir, "output directory");
  cmd->add_flag("--strict", cfg.strict,
                "treat scenario warnings as errors");
  cmd->add_option("--pi-des", cfg.pi_des,
                  "override the price cap (EUR/MWh)");
  cmd->add_option("--ess-capacity", cfg.ess_capacity, "ESS capacity (MWh)");
  cmd->add_option("--ess-power", cfg.ess_power, "ESS power bound (MW)");
  cmd->add_option("--ess-loss", cfg.ess_loss, "ESS standing loss (MWh/step)");
  cmd->add_option("--ess-soc", cfg.ess_initial_soc,
                  "ESS initial state of charge (fraction)");
  std::map<std::string, flexcap::kernels::Exec> modes{
      {"serial", flexcap::kernels::Exec::serial},
      {"parallel", flexcap::kernels::Exec::parallel},
      {"auto", flexcap::kernels::Exec::automatic}};
  cmd->add_option("--exec", cfg.exec, "execution mode")
      ->transform(CLI::CheckedTransformer(modes, CLI::ignore_case));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LMP hedging via demand-side flexibility from storage"};
  app.require_subcommand(1);

  flexcap::cli::RunConfig cfg;
  std::string emit = "json";
  std::string parameter;
  std::vector<double> values;

  CLI::App* run = app.add_subcommand(
      "run", "receding-horizon MPC runs plus the no-ESS baseline");
  add_common(run, cfg);
  run->add_option("--horizons", cfg.horizons,
                  "lookahead lengths (e.g. --horizons 1 6 8)")
      ->delimiter(',');
  run->add_option("--emit", emit, "summary format: json|csv")
      ->check(CLI::IsMember({"json", "csv"}));

  CLI::App* quantify = app.add_subcommand(
      "quantify", "per-hour required flexibility, ignoring ESS limits");
  add_common(quantify, cfg);

  CLI::App* sweep =
      app.add_subcommand("sweep", "evaluate a grid of parameter values");
  add_common(sweep, cfg);
  sweep->add_option("--horizons", cfg.horizons,
                    "lookahead used for non-horizon sweeps")
      ->delimiter(',');
  sweep->add_option("--parameter", parameter, "ess-capacity|horizon|pi-des")
      ->required();
  sweep->add_option("--values", values, "grid values")
      ->required()
      ->delimiter(',');

  CLI::App* validate =
      app.add_subcommand("validate", "load and check a scenario");
  add_common(validate, cfg);

  CLI11_PARSE(app, argc, argv);
  cfg.emit = emit == "csv" ? flexcap::cli::RunConfig::Emit::csv
                           : flexcap::cli::RunConfig::Emit::json;

  if (run->parsed()) return flexcap::cli::cmd_run(cfg);
  if (quantify->parsed()) return flexcap::cli::cmd_quantify(cfg);
  if (sweep->parsed()) return flexcap::cli::cmd_sweep(cfg, parameter, values);
  if (validate->parsed()) return flexcap::cli::cmd_validate(cfg);
  return flexcap::cli::kExitError;
}
