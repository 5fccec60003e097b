#include <doctest.h>

#include "rgsc/oracle.hpp"
#include "support.hpp"

using namespace rgsc;
using namespace rgsc::testing;

namespace {

GeneratedInstance forced_flow(int suppliers) {
  NetworkSets s;
  s.suppliers_main = suppliers;
  auto g = flat_instance(s, 2.0);
  for (double& v : g.instance.short_cost.data()) v = 100.0;
  return g;
}

}  // namespace

TEST_SUITE("oracle") {

TEST_CASE("zero demand costs nothing") {
  NetworkSets s;
  s.suppliers_main = 2;
  s.periods = 2;
  const auto g = flat_instance(s, 0.0);
  const auto r = oracle::enumerate_optimal(g.instance, g.scenarios, {}, {}, 3);
  REQUIRE(r.feasible);
  CHECK(r.objective == 0.0);
}

TEST_CASE("single chain with demand 2") {
  const auto g = forced_flow(1);
  const auto r = oracle::enumerate_optimal(g.instance, g.scenarios, {}, {}, 3);
  REQUIRE(r.feasible);
  CHECK(r.assignment.x(0, 0, 0, 0, 0) == 2.0);
  CHECK(r.assignment.y(0, 0, 0, 0, 0) == 2.0);
  CHECK(r.assignment.z(0, 0, 0, 0, 0) == 2.0);
  // delay 3 links x 1 + transport 3 x 2 | production 2 + transport emission 3 x 2
  const double z1 = 3.0 + 6.0, z2 = 2.0 + 6.0;
  CHECK(r.objective == z1 + z2);
  const auto obj = oracle::evaluate(g.instance, g.scenarios, {}, {}, r.assignment);
  CHECK(obj.z1 == z1);
  CHECK(obj.z2 == z2);

  const auto mip = solve_model(build_model(g.instance, g.scenarios, {}));
  CHECK(mip.objective == z1 + z2);
}

TEST_CASE("cheaper second supplier is selected alone") {
  auto g = forced_flow(2);
  g.instance.transport_cost1(1, 0, 0, 0) = 0.0;
  const auto r = oracle::enumerate_optimal(g.instance, g.scenarios, {}, {}, 3);
  REQUIRE(r.feasible);
  CHECK(r.assignment.xx(0, 0, 0, 0) == 0.0);
  CHECK(r.assignment.xx(1, 0, 0, 0) == 1.0);
  CHECK(r.assignment.x(1, 0, 0, 0, 0) == 2.0);
}

TEST_CASE("weights scale the two objectives") {
  const auto g = forced_flow(1);
  const auto r = oracle::enumerate_optimal(g.instance, g.scenarios, {}, {2.0, 3.0, false}, 3);
  CHECK(r.objective == 2.0 * 9.0 + 3.0 * 8.0);
}

TEST_CASE("emission cap of zero is infeasible") {
  auto g = forced_flow(1);
  for (double& c : g.instance.cap) c = 0.0;
  const auto r = oracle::enumerate_optimal(g.instance, g.scenarios, {}, {}, 3);
  CHECK_FALSE(r.feasible);
}

TEST_CASE("checker reports unmet demand and flow without a link") {
  const auto g = forced_flow(1);
  auto a = oracle::enumerate_optimal(g.instance, g.scenarios, {}, {}, 3).assignment;
  CHECK(oracle::check(g.instance, g.scenarios, {}, a).empty());
  auto b = a;
  b.z(0, 0, 0, 0, 0) = 1.0;
  CHECK_FALSE(oracle::check(g.instance, g.scenarios, {}, b).empty());
  auto c = a;
  c.xx(0, 0, 0, 0) = 0.0;
  CHECK_FALSE(oracle::check(g.instance, g.scenarios, {}, c).empty());
}

TEST_CASE("search guard") {
  NetworkSets s;
  s.suppliers_main = 2;
  s.retailers = 2;
  s.periods = 2;
  s.modes = 2;
  s.scenarios = 2;
  const auto g = flat_instance(s, 3.0);
  CHECK_THROWS_AS(oracle::enumerate_optimal(g.instance, g.scenarios, {}, {}, 5, 1000),
                  oracle::GuardExceeded);
}

TEST_CASE("agrees with branch and bound on sampled tiny instances") {
  for (std::uint64_t seed : {1, 2, 4, 5, 6, 7, 10, 12}) {
    CAPTURE(seed);
    const TinyCase tc = random_tiny_case(seed);
    const auto r = oracle::enumerate_optimal(tc.instance, tc.scenarios, tc.strategies,
                                             {tc.w_cost, tc.w_emission, false}, tc.max_flow);
    const MilpModel m = build_model(tc.instance, tc.scenarios, tc.strategies, tiny_options(tc));
    const auto mip = solve_model(m);
    CHECK(r.feasible == bool(mip.incumbent));
    if (!r.feasible) continue;
    CHECK(mip.objective == doctest::Approx(r.objective).epsilon(1e-12));
    // the enumerated plan is feasible and has the same value in the model
    const auto x = to_point(m, r.assignment);
    CHECK(check_feasibility(m, x, 1e-6).empty());
    CHECK(m.lp.objective(x) == doctest::Approx(r.objective).epsilon(1e-12));
  }
}

}  // TEST_SUITE
