#include "flexcap/grid.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "flexcap/common.hpp"

namespace flexcap::grid {

int Network::bus_index(std::string_view id) const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].id == id) return static_cast<int>(i);
  return -1;
}

int Network::slack_index() const {
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].kind == BusKind::slack) return static_cast<int>(i);
  return -1;
}

std::vector<int> Network::price_constrained_indices() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < buses.size(); ++i)
    if (buses[i].price_constrained) out.push_back(static_cast<int>(i));
  return out;
}

double dc_flow(double theta_from, double theta_to, const Line& line,
               double base_mva) {
  return (theta_from - theta_to) / line.reactance * base_mva;
}

const char* issue_name(IssueCode code) {
  switch (code) {
    case IssueCode::no_buses: return "NoBuses";
    case IssueCode::no_slack: return "NoSlack";
    case IssueCode::multiple_slack: return "MultipleSlack";
    case IssueCode::bad_reactance: return "BadReactance";
    case IssueCode::bad_limit: return "BadLimit";
    case IssueCode::self_loop: return "SelfLoop";
    case IssueCode::duplicate_line: return "DuplicateLine";
    case IssueCode::unknown_bus: return "UnknownBus";
    case IssueCode::disconnected: return "Disconnected";
  }
  return "Issue";
}

std::vector<ValidationIssue> validate(const Network& network) {
  std::vector<ValidationIssue> issues;
  auto add = [&](IssueCode c, std::string msg) {
    issues.push_back({c, std::move(msg)});
  };

  if (network.buses.empty()) {
    add(IssueCode::no_buses, "network has no buses");
    return issues;
  }

  int slack_count = 0;
  std::set<std::string> seen_ids;
  for (const Bus& b : network.buses) {
    if (b.kind == BusKind::slack) ++slack_count;
    if (!seen_ids.insert(b.id).second)
      add(IssueCode::unknown_bus, "duplicate bus id '" + b.id + "'");
  }
  if (slack_count == 0) add(IssueCode::no_slack, "no slack bus");
  if (slack_count > 1)
    add(IssueCode::multiple_slack,
        std::to_string(slack_count) + " slack buses, expected exactly one");

  std::set<std::pair<std::string, std::string>> seen_lines;
  for (const Line& l : network.lines) {
    if (!(l.reactance > 0.0) || !std::isfinite(l.reactance))
      add(IssueCode::bad_reactance,
          "line " + l.from + "-" + l.to + " has non-positive reactance");
    if (l.flow_limit < 0.0 || std::isnan(l.flow_limit))
      add(IssueCode::bad_limit,
          "line " + l.from + "-" + l.to + " has negative flow limit");
    if (l.from == l.to)
      add(IssueCode::self_loop, "line " + l.from + "-" + l.to + " is a self-loop");
    if (network.bus_index(l.from) < 0)
      add(IssueCode::unknown_bus, "line endpoint '" + l.from + "' not a bus");
    if (network.bus_index(l.to) < 0)
      add(IssueCode::unknown_bus, "line endpoint '" + l.to + "' not a bus");
    auto key = std::minmax(l.from, l.to);
    if (!seen_lines.insert({key.first, key.second}).second)
      add(IssueCode::duplicate_line,
          "duplicate line between " + l.from + " and " + l.to);
  }

  // Connectivity over valid endpoints.
  const int n = static_cast<int>(network.buses.size());
  std::vector<int> comp(n, -1);
  std::vector<int> stack;
  comp[0] = 0;
  stack.push_back(0);
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const Line& l : network.lines) {
      const int a = network.bus_index(l.from);
      const int b = network.bus_index(l.to);
      if (a < 0 || b < 0) continue;
      int v = -1;
      if (a == u) v = b;
      if (b == u) v = a;
      if (v >= 0 && comp[v] < 0) {
        comp[v] = 0;
        stack.push_back(v);
      }
    }
  }
  for (int i = 0; i < n; ++i)
    if (comp[i] < 0) {
      add(IssueCode::disconnected,
          "bus '" + network.buses[i].id + "' unreachable from '" +
              network.buses[0].id + "'");
    }

  return issues;
}

void ensure_valid(const Network& network) {
  const auto issues = validate(network);
  if (issues.empty()) return;
  std::string msg = "invalid network:";
  for (const auto& i : issues)
    msg += std::string(" [") + issue_name(i.code) + "] " + i.message + ";";
  throw Error(Errc::validation_error, msg);
}

}  // namespace flexcap::grid
