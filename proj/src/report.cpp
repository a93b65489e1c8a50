#include "flexcap/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "flexcap/common.hpp"

namespace flexcap::report {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
  std::filesystem::create_directories(path.parent_path().empty()
                                          ? "."
                                          : path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::parse_error, "cannot write " + tmp.string());
    out << content;
  }
  std::filesystem::rename(tmp, path);
}

std::string trajectory_csv(const mpc::Trajectory& traj) {
  std::ostringstream out;
  out << "hour";
  for (const std::string& b : traj.bus_ids) out << ",lmp_" << b;
  out << ",flex,soc,import_trans,gen_dist,load,step_cost\n";
  for (const mpc::StepRecord& s : traj.steps) {
    out << s.hour;
    for (double v : s.lmp) out << ',' << fmt(v);
    out << ',' << fmt(s.flex) << ',' << fmt(s.soc) << ','
        << fmt(s.import_trans) << ',' << fmt(s.gen_dist) << ','
        << fmt(s.load_served) << ',' << fmt(s.step_cost) << "\n";
  }
  return out.str();
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const mpc::Trajectory& traj) {
  write_text_atomic(path, trajectory_csv(traj));
}

mpc::Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path.string());

  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(s);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    return cells;
  };

  std::string line;
  if (!std::getline(in, line))
    throw Error(Errc::parse_error, path.string() + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const auto header = split(line);

  mpc::Trajectory traj;
  std::size_t c = 1;
  while (c < header.size() && header[c].starts_with("lmp_"))
    traj.bus_ids.push_back(header[c++].substr(4));
  const std::size_t expect = 1 + traj.bus_ids.size() + 6;
  if (header.empty() || header[0] != "hour" || header.size() != expect)
    throw Error(Errc::parse_error, path.string() + ": unexpected header");

  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto cells = split(line);
    if (cells.size() != expect)
      throw Error(Errc::parse_error,
                  path.string() + ":" + std::to_string(lineno) +
                      ": wrong cell count");
    auto num = [&](std::size_t i) {
      char* end = nullptr;
      const double v = std::strtod(cells[i].c_str(), &end);
      if (end == cells[i].c_str() || *end != '\0')
        throw Error(Errc::parse_error, path.string() + ":" +
                                           std::to_string(lineno) +
                                           ": not a number: " + cells[i]);
      return v;
    };
    mpc::StepRecord s;
    s.hour = static_cast<int>(num(0));
    std::size_t i = 1;
    for (std::size_t b = 0; b < traj.bus_ids.size(); ++b)
      s.lmp.push_back(num(i++));
    s.flex = num(i++);
    s.soc = num(i++);
    s.import_trans = num(i++);
    s.gen_dist = num(i++);
    s.load_served = num(i++);
    s.step_cost = num(i++);
    traj.steps.push_back(std::move(s));
  }
  return traj;
}

std::string savings_json(const mpc::SavingsReport& rep,
                         const std::string& scenario_name) {
  nlohmann::json j;
  j["scenario"] = scenario_name;
  j["note"] = "calibrated synthetic reconstruction; EUR figures are illustrative";
  j["baseline_cost_per_mwh"] = rep.baseline_cost_per_mwh;
  j["horizons"] = nlohmann::json::array();
  for (const mpc::SavingsEntry& e : rep.entries) {
    nlohmann::json je{{"H", e.horizon},
                      {"cost_per_mwh", e.cost_per_mwh},
                      {"saving_vs_baseline", e.saving_vs_baseline}};
    if (e.forecast_gain) je["forecast_gain"] = *e.forecast_gain;
    if (e.forecast_gain_pct) je["forecast_gain_pct"] = *e.forecast_gain_pct;
    j["horizons"].push_back(std::move(je));
  }
  return j.dump(2) + "\n";
}

std::string savings_csv(const mpc::SavingsReport& rep) {
  std::ostringstream out;
  out << "H,cost_per_mwh,saving_vs_baseline,forecast_gain,forecast_gain_pct\n";
  out << "baseline," << fmt(rep.baseline_cost_per_mwh) << ",0,,\n";
  for (const mpc::SavingsEntry& e : rep.entries) {
    out << e.horizon << ',' << fmt(e.cost_per_mwh) << ','
        << fmt(e.saving_vs_baseline) << ',';
    if (e.forecast_gain) out << fmt(*e.forecast_gain);
    out << ',';
    if (e.forecast_gain_pct) out << fmt(*e.forecast_gain_pct);
    out << "\n";
  }
  return out.str();
}

}  // namespace flexcap::report
