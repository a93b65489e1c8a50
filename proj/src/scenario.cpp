#include "flexcap/scenario.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include <json.hpp>

#include "flexcap/common.hpp"
#include "flexcap/lp.hpp"

#ifndef FLEXCAP_DATA_DIR
#define FLEXCAP_DATA_DIR "data"
#endif

namespace flexcap::scenario {

namespace {

using nlohmann::json;

double series_at(const std::vector<double>& s, int t) { return s[t - 1]; }

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

}  // namespace

market::DispatchInputs Scenario::inputs_for(int t) const {
  if (t < 1 || t > horizon)
    throw Error(Errc::validation_error,
                "hour " + std::to_string(t) + " outside 1.." +
                    std::to_string(horizon));
  market::DispatchInputs in;
  for (const GeneratorSpec& g : generators) {
    const double cost = g.price == PriceSeries::trans ? series_at(a_trans, t)
                                                      : series_at(a_dist, t);
    in.generators.push_back({g.id, g.bus, g.capacity_mw, cost});
  }
  for (const LoadSpec& l : loads)
    in.loads.push_back({l.id, l.bus, series_at(demand_lo, t),
                        series_at(demand_hi, t), series_at(b_load, t)});
  for (const grid::Bus& b : network.buses)
    if (b.price_constrained)
      in.price_caps.push_back({b.id, series_at(pi_des, t)});
  return in;
}

std::string Scenario::constrained_bus() const {
  for (const grid::Bus& b : network.buses)
    if (b.price_constrained) return b.id;
  return {};
}

void validate(const Scenario& sc) {
  if (sc.horizon < 1)
    throw Error(Errc::validation_error, "horizon must be >= 1");
  auto check_len = [&](const std::vector<double>& s, const char* name) {
    if (static_cast<int>(s.size()) != sc.horizon)
      throw Error(Errc::validation_error,
                  std::string("series length: ") + name + " has " +
                      std::to_string(s.size()) + " entries, horizon is " +
                      std::to_string(sc.horizon));
  };
  check_len(sc.a_trans, "a_trans");
  check_len(sc.a_dist, "a_dist");
  check_len(sc.b_load, "b_load");
  check_len(sc.demand_lo, "demand_lo");
  check_len(sc.demand_hi, "demand_hi");
  check_len(sc.pi_des, "pi_des");

  grid::ensure_valid(sc.network);
  if (sc.network.price_constrained_indices().empty())
    throw Error(Errc::validation_error, "no price-constrained bus");

  std::set<std::string> ids;
  for (const GeneratorSpec& g : sc.generators) {
    if (sc.network.bus_index(g.bus) < 0)
      throw Error(Errc::validation_error,
                  "generator '" + g.id + "' on unknown bus '" + g.bus + "'");
    if (!ids.insert(g.id).second)
      throw Error(Errc::validation_error, "duplicate device id '" + g.id + "'");
  }
  for (const LoadSpec& l : sc.loads) {
    if (sc.network.bus_index(l.bus) < 0)
      throw Error(Errc::validation_error,
                  "load '" + l.id + "' on unknown bus '" + l.bus + "'");
    if (!ids.insert(l.id).second)
      throw Error(Errc::validation_error, "duplicate device id '" + l.id + "'");
  }
  if (sc.loads.empty())
    throw Error(Errc::validation_error, "scenario has no load");
  if (sc.generators.empty())
    throw Error(Errc::validation_error, "scenario has no generator");

  for (int t = 1; t <= sc.horizon; ++t) {
    if (!(series_at(sc.demand_lo, t) <= series_at(sc.demand_hi, t)))
      throw Error(Errc::validation_error,
                  "demand_lo > demand_hi at hour " + std::to_string(t));
    if (!(series_at(sc.pi_des, t) > 0.0))
      throw Error(Errc::validation_error,
                  "pi_des must be positive at hour " + std::to_string(t));
  }

  if (sc.ess) {
    storage::validate_spec(*sc.ess);
    const int b = sc.network.bus_index(sc.ess->host_bus);
    if (b < 0 || !sc.network.buses[b].price_constrained)
      throw Error(Errc::missing_storage_host,
                  "storage host '" + sc.ess->host_bus +
                      "' is not a price-constrained bus");
  }
}

std::vector<std::string> soft_checks(const Scenario& sc) {
  std::vector<std::string> out;
  for (int t = 1; t <= sc.horizon; ++t) {
    if (!(series_at(sc.a_dist, t) < series_at(sc.a_trans, t)))
      out.push_back("a_dist >= a_trans at hour " + std::to_string(t));
    if (!(series_at(sc.b_load, t) > series_at(sc.pi_des, t)))
      out.push_back("b_load <= pi_des at hour " + std::to_string(t));
  }
  return out;
}

namespace {

std::vector<double> parse_series_number(const json& j, int horizon,
                                        const char* what) {
  std::vector<double> out;
  if (j.is_number()) {
    out.assign(horizon, j.get<double>());
  } else if (j.is_array()) {
    for (const auto& v : j) out.push_back(v.get<double>());
  } else {
    throw Error(Errc::parse_error,
                std::string(what) + " must be a number or array");
  }
  return out;
}

void parse_series_csv(const std::filesystem::path& file, Scenario& sc) {
  std::ifstream in(file);
  if (!in)
    throw Error(Errc::parse_error, "cannot open series file " + file.string());

  static constexpr std::array<const char*, 6> kColumns = {
      "hour", "a_trans", "a_dist", "b_load", "demand_lo", "demand_hi"};

  std::string line;
  int lineno = 0;
  auto fail = [&](int col, const std::string& msg) -> void {
    throw Error(Errc::parse_error, file.filename().string() + ":" +
                                       std::to_string(lineno) + ":" +
                                       std::to_string(col + 1) + ": " + msg);
  };

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!s.empty() && s.back() == ',') cells.push_back("");
    return cells;
  };

  if (!std::getline(in, line))
    throw Error(Errc::parse_error, "empty series file " + file.string());
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);
  if (header.size() != kColumns.size()) fail(0, "expected 6 columns");
  for (std::size_t c = 0; c < kColumns.size(); ++c)
    if (header[c] != kColumns[c])
      fail(static_cast<int>(c),
           "expected column '" + std::string(kColumns[c]) + "', got '" +
               header[c] + "'");

  int expected_hour = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != kColumns.size()) fail(0, "expected 6 cells");
    std::array<double, 6> v{};
    for (std::size_t c = 0; c < cells.size(); ++c) {
      char* end = nullptr;
      v[c] = std::strtod(cells[c].c_str(), &end);
      if (end == cells[c].c_str() || *end != '\0')
        fail(static_cast<int>(c), "not a number: '" + cells[c] + "'");
    }
    if (static_cast<int>(v[0]) != expected_hour)
      fail(0, "expected hour " + std::to_string(expected_hour));
    ++expected_hour;
    sc.a_trans.push_back(v[1]);
    sc.a_dist.push_back(v[2]);
    sc.b_load.push_back(v[3]);
    sc.demand_lo.push_back(v[4]);
    sc.demand_hi.push_back(v[5]);
  }
}

}  // namespace

Scenario load_scenario(const std::filesystem::path& file, bool strict,
                       std::vector<std::string>* warnings) {
  std::ifstream in(file);
  if (!in)
    throw Error(Errc::parse_error, "cannot open scenario " + file.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error,
                file.string() + ": " + std::string(e.what()));
  }

  Scenario sc;
  try {
    sc.name = j.value("name", file.parent_path().filename().string());
    sc.horizon = j.value("horizon", 24);
    sc.network.base_mva = j.value("base_mva", 1.0);
    for (const auto& b : j.at("buses")) {
      grid::Bus bus;
      bus.id = b.at("id").get<std::string>();
      bus.kind = b.value("slack", false) ? grid::BusKind::slack
                                         : grid::BusKind::mixed;
      bus.price_constrained = b.value("price_constrained", false);
      sc.network.buses.push_back(std::move(bus));
    }
    for (const auto& l : j.at("lines")) {
      grid::Line line;
      line.from = l.at("from").get<std::string>();
      line.to = l.at("to").get<std::string>();
      line.reactance = l.at("reactance").get<double>();
      line.flow_limit = l.value("limit", grid::kUnlimited);
      sc.network.lines.push_back(std::move(line));
    }
    for (const auto& g : j.at("generators")) {
      GeneratorSpec gs;
      gs.id = g.at("id").get<std::string>();
      gs.bus = g.at("bus").get<std::string>();
      gs.capacity_mw = g.at("capacity_mw").get<double>();
      const std::string p = g.at("price").get<std::string>();
      if (p == "a_trans")
        gs.price = PriceSeries::trans;
      else if (p == "a_dist")
        gs.price = PriceSeries::dist;
      else
        throw Error(Errc::parse_error,
                    "generator price must be a_trans or a_dist, got '" + p + "'");
      sc.generators.push_back(std::move(gs));
    }
    for (const auto& l : j.at("loads"))
      sc.loads.push_back(
          {l.at("id").get<std::string>(), l.at("bus").get<std::string>()});
    if (j.contains("storage") && !j["storage"].is_null()) {
      const auto& s = j["storage"];
      storage::StorageSpec spec;
      spec.host_bus = s.at("bus").get<std::string>();
      spec.capacity_mwh = s.at("capacity_mwh").get<double>();
      spec.power_bound_mw = s.at("power_mw").get<double>();
      spec.loss_mwh = s.value("loss_mwh", 0.0);
      spec.initial_soc = s.value("initial_soc", 0.5);
      sc.ess = spec;
    }
    sc.pi_des = parse_series_number(j.at("pi_des"), sc.horizon, "pi_des");
    const std::string series =
        j.value("series_file", std::string("series.csv"));
    parse_series_csv(file.parent_path() / series, sc);
  } catch (const json::exception& e) {
    throw Error(Errc::parse_error, file.string() + ": " + std::string(e.what()));
  }

  validate(sc);
  auto warn = soft_checks(sc);
  if (strict && !warn.empty()) {
    std::string msg = "strict mode:";
    for (const auto& w : warn) msg += " " + w + ";";
    throw Error(Errc::validation_error, msg);
  }
  if (warnings) *warnings = std::move(warn);
  return sc;
}

void save_scenario(const Scenario& sc, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  json j;
  j["name"] = sc.name;
  j["horizon"] = sc.horizon;
  j["base_mva"] = sc.network.base_mva;
  j["buses"] = json::array();
  for (const grid::Bus& b : sc.network.buses) {
    json jb{{"id", b.id}};
    if (b.kind == grid::BusKind::slack) jb["slack"] = true;
    if (b.price_constrained) jb["price_constrained"] = true;
    j["buses"].push_back(std::move(jb));
  }
  j["lines"] = json::array();
  for (const grid::Line& l : sc.network.lines) {
    json jl{{"from", l.from}, {"to", l.to}, {"reactance", l.reactance}};
    if (std::isfinite(l.flow_limit)) jl["limit"] = l.flow_limit;
    j["lines"].push_back(std::move(jl));
  }
  j["generators"] = json::array();
  for (const GeneratorSpec& g : sc.generators)
    j["generators"].push_back(
        {{"id", g.id},
         {"bus", g.bus},
         {"capacity_mw", g.capacity_mw},
         {"price", g.price == PriceSeries::trans ? "a_trans" : "a_dist"}});
  j["loads"] = json::array();
  for (const LoadSpec& l : sc.loads)
    j["loads"].push_back({{"id", l.id}, {"bus", l.bus}});
  if (sc.ess)
    j["storage"] = {{"bus", sc.ess->host_bus},
                    {"capacity_mwh", sc.ess->capacity_mwh},
                    {"power_mw", sc.ess->power_bound_mw},
                    {"loss_mwh", sc.ess->loss_mwh},
                    {"initial_soc", sc.ess->initial_soc}};
  bool flat_cap = true;
  for (double v : sc.pi_des)
    if (v != sc.pi_des.front()) flat_cap = false;
  if (flat_cap)
    j["pi_des"] = sc.pi_des.front();
  else
    j["pi_des"] = sc.pi_des;
  j["series_file"] = "series.csv";

  std::ofstream out(dir / "scenario.json");
  out << j.dump(2) << "\n";

  std::ofstream csv(dir / "series.csv");
  csv << "hour,a_trans,a_dist,b_load,demand_lo,demand_hi\n";
  for (int t = 1; t <= sc.horizon; ++t)
    csv << t << ',' << fmt12(series_at(sc.a_trans, t)) << ','
        << fmt12(series_at(sc.a_dist, t)) << ','
        << fmt12(series_at(sc.b_load, t)) << ','
        << fmt12(series_at(sc.demand_lo, t)) << ','
        << fmt12(series_at(sc.demand_hi, t)) << "\n";
}

namespace {

// Platform-stable uniform in [0, 1): mt19937_64 output is standardized,
// std::uniform_real_distribution is not.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Rounds to `step` and normalizes through the CSV text representation so
// that saved files reload to bit-identical values.
double round_to(double v, double step) {
  const double r = std::round(v / step) * step;
  return std::strtod(fmt12(r).c_str(), nullptr);
}

}  // namespace

Scenario synthesize_apx_like(std::uint64_t seed, const SynthTargets& targets) {
  constexpr int kT = 24;
  for (int t : targets.hours_above_cap)
    if (t < 1 || t > kT)
      throw Error(Errc::calibration_failed,
                  "target hour " + std::to_string(t) + " outside 1..24");
  if (!(targets.pi_des > 0.0))
    throw Error(Errc::calibration_failed, "pi_des must be positive");

  Scenario sc;
  sc.name = "apx_like";
  sc.horizon = kT;
  sc.network.base_mva = 1.0;
  sc.network.buses = {{"bus1", grid::BusKind::slack, false},
                      {"bus2", grid::BusKind::mixed, false},
                      {"bus3", grid::BusKind::mixed, true}};
  sc.network.lines = {{"bus1", "bus2", 0.1, 50.0},
                      {"bus1", "bus3", 0.1, 50.0},
                      {"bus2", "bus3", 0.1, 50.0}};
  const double dist_cap = 3.0;
  sc.generators = {{"trans", "bus1", 100.0, PriceSeries::trans},
                   {"dist", "bus2", dist_cap, PriceSeries::dist}};
  sc.loads = {{"prl", "bus3"}};
  sc.ess = storage::StorageSpec{"bus3", 2.6, 1.0, 0.0, 0.75};
  sc.pi_des.assign(kT, targets.pi_des);

  // APX-like day-ahead shape: night trough, morning ramp into a midday
  // peak, afternoon shoulder, evening peak, late decline.
  static constexpr double kPriceShape[kT] = {
      44, 41, 39, 38, 40, 46, 55, 65, 84, 90, 93, 89,
      82, 66, 60, 58, 62, 86, 91, 84, 68, 58, 50, 46};
  // Demand above the distributed capacity, double-peaked like the price.
  static constexpr double kResidualShape[kT] = {
      0.16, 0.15, 0.14, 0.15, 0.17, 0.20, 0.24, 0.30, 0.36, 0.40, 0.42, 0.38,
      0.34, 0.30, 0.26, 0.24, 0.26, 0.36, 0.40, 0.34, 0.28, 0.24, 0.20, 0.18};

  std::mt19937_64 rng(seed);
  const double cap = targets.pi_des;
  std::vector<bool> is_target(kT + 1, false);
  for (int t : targets.hours_above_cap) is_target[t] = true;

  for (int t = 1; t <= kT; ++t) {
    double price = kPriceShape[t - 1] + (uniform01(rng) * 4.0 - 2.0);
    if (is_target[t])
      price = std::clamp(std::max(price, cap + 6.0), cap + 5.0, cap + 25.0);
    else
      price = std::clamp(std::min(price, cap - 6.0), 25.0, cap - 5.0);
    sc.a_trans.push_back(round_to(price, 0.01));

    sc.a_dist.push_back(round_to(19.0 + uniform01(rng) * 3.0, 0.01));
    sc.b_load.push_back(200.0);

    const double demand = round_to(
        dist_cap + kResidualShape[t - 1] + (uniform01(rng) * 0.04 - 0.02),
        0.001);
    sc.demand_lo.push_back(demand);
    sc.demand_hi.push_back(demand);
  }

  validate(sc);

  // Calibration gate: the uncapped OPF must price above the cap exactly at
  // the target hours.
  for (int t = 1; t <= kT; ++t) {
    market::DispatchInputs in = sc.inputs_for(t);
    for (auto& pc : in.price_caps) pc.cap = lp::kInf;
    const auto prog = market::build_hedged_opf_single(sc.network, in, t);
    const auto sol = lp::solve(prog);
    if (sol.status != lp::SolveStatus::optimal)
      throw Error(Errc::calibration_failed,
                  "uncapped OPF not optimal at hour " + std::to_string(t));
    const double lmp =
        market::extract_lmp(prog, sol, sc.constrained_bus(), t);
    if (is_target[t] != (lmp > cap))
      throw Error(Errc::calibration_failed,
                  "hour " + std::to_string(t) + " uncapped LMP " +
                      std::to_string(lmp) + " does not match target set");
  }
  return sc;
}

std::filesystem::path resolve_scenario(const std::string& name_or_path) {
  namespace fs = std::filesystem;
  fs::path p(name_or_path);
  if (fs::exists(p)) {
    if (fs::is_directory(p) && fs::exists(p / "scenario.json"))
      return p / "scenario.json";
    return p;
  }
  std::vector<fs::path> roots;
  if (const char* env = std::getenv("FLEXCAP_SCENARIO_DIR")) roots.emplace_back(env);
  roots.emplace_back(FLEXCAP_DATA_DIR);
  for (const fs::path& root : roots) {
    const fs::path candidate = root / name_or_path / "scenario.json";
    if (fs::exists(candidate)) return candidate;
  }
  throw Error(Errc::parse_error,
              "scenario '" + name_or_path + "' not found (checked "
              "$FLEXCAP_SCENARIO_DIR and " FLEXCAP_DATA_DIR ")");
}

}  // namespace flexcap::scenario
