#pragma once

#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace flexcap::grid {

inline constexpr double kUnlimited = std::numeric_limits<double>::infinity();

enum class BusKind { slack, generator, load, mixed };

struct Bus {
  std::string id;
  BusKind kind = BusKind::mixed;
  bool price_constrained = false;
};

// Undirected line; (from, to) fixes the canonical flow orientation.
struct Line {
  std::string from;
  std::string to;
  double reactance = 0.1;           // per-unit, > 0
  double flow_limit = kUnlimited;   // MW, symmetric +/- limit
};

struct Network {
  std::vector<Bus> buses;
  std::vector<Line> lines;
  double base_mva = 1.0;

  int bus_index(std::string_view id) const;  // -1 if absent
  int slack_index() const;                   // first slack bus, -1 if none
  std::vector<int> price_constrained_indices() const;
};

// Flow on `line` in MW, positive from->to: (theta_from - theta_to)/X * base.
double dc_flow(double theta_from, double theta_to, const Line& line,
               double base_mva = 1.0);

enum class IssueCode {
  no_buses,
  no_slack,
  multiple_slack,
  bad_reactance,
  bad_limit,
  self_loop,
  duplicate_line,
  unknown_bus,
  disconnected,
};

struct ValidationIssue {
  IssueCode code;
  std::string message;
};

const char* issue_name(IssueCode code);

// Empty result means the network is valid and connected.
std::vector<ValidationIssue> validate(const Network& network);

// Throws Error(validation_error) listing all issues when validate() is
// non-empty.
void ensure_valid(const Network& network);

}  // namespace flexcap::grid
