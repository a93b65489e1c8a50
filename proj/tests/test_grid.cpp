#include <doctest.h>

#include <random>

#include "flexcap/grid.hpp"
#include "test_support.hpp"

using namespace flexcap::grid;

namespace {

Network fig1_triangle() {
  Network n;
  n.buses = {{"bus1", BusKind::slack, false},
             {"bus2", BusKind::mixed, false},
             {"bus3", BusKind::mixed, true}};
  n.lines = {{"bus1", "bus2", 0.1, kUnlimited},
             {"bus1", "bus3", 0.1, kUnlimited},
             {"bus2", "bus3", 0.1, kUnlimited}};
  return n;
}

bool has_issue(const std::vector<ValidationIssue>& issues, IssueCode c) {
  for (const auto& i : issues)
    if (i.code == c) return true;
  return false;
}

}  // namespace

TEST_CASE("dc flow arithmetic") {
  const Line l{"a", "b", 0.1, kUnlimited};
  CHECK(dc_flow(0.01, 0.0, l, 1.0) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(dc_flow(0.02, 0.02, l, 1.0) == 0.0);
  CHECK(dc_flow(0.03, 0.01, l, 100.0) == doctest::Approx(20.0));
}

TEST_CASE("dc flow antisymmetry") {
  std::mt19937_64 rng(4001);
  for (int i = 0; i < 50; ++i) {
    const Line l{"a", "b", testsup::uniform(rng, 0.01, 1.0), kUnlimited};
    const double ta = testsup::uniform(rng, -0.5, 0.5);
    const double tb = testsup::uniform(rng, -0.5, 0.5);
    CHECK(dc_flow(ta, tb, l) == -dc_flow(tb, ta, l));
  }
}

TEST_CASE("triangle network validates clean") {
  CHECK(validate(fig1_triangle()).empty());
}

TEST_CASE("validation issue catalogue") {
  Network disconnected;
  disconnected.buses = {{"a", BusKind::slack, false}, {"b", BusKind::mixed, false}};
  CHECK(has_issue(validate(disconnected), IssueCode::disconnected));

  Network two_slack = fig1_triangle();
  two_slack.buses[1].kind = BusKind::slack;
  CHECK(has_issue(validate(two_slack), IssueCode::multiple_slack));

  Network no_slack = fig1_triangle();
  no_slack.buses[0].kind = BusKind::mixed;
  CHECK(has_issue(validate(no_slack), IssueCode::no_slack));

  Network bad_x = fig1_triangle();
  bad_x.lines[0].reactance = 0.0;
  CHECK(has_issue(validate(bad_x), IssueCode::bad_reactance));

  Network self_loop = fig1_triangle();
  self_loop.lines[0].to = "bus1";
  CHECK(has_issue(validate(self_loop), IssueCode::self_loop));

  Network dup = fig1_triangle();
  dup.lines.push_back({"bus3", "bus2", 0.2, kUnlimited});
  CHECK(has_issue(validate(dup), IssueCode::duplicate_line));

  Network ghost = fig1_triangle();
  ghost.lines[0].to = "bus9";
  CHECK(has_issue(validate(ghost), IssueCode::unknown_bus));

  CHECK_THROWS_AS(ensure_valid(ghost), flexcap::Error);
}
