#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "rgsc/formulation.hpp"
#include "rgsc/oracle.hpp"
#include "rgsc/solver.hpp"
#include "support.hpp"

using namespace rgsc;
using namespace rgsc::testing;

namespace {

bool rel_close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

LinearProgram permuted(const LinearProgram& lp, const std::vector<int>& perm) {
  // perm[new] = old
  std::vector<int> where(perm.size());
  for (std::size_t n = 0; n < perm.size(); ++n) where[perm[n]] = int(n);
  LinearProgram out;
  out.objective_offset = lp.objective_offset;
  for (int old : perm)
    out.add_col(lp.cost[old], lp.col_lower[old], lp.col_upper[old], lp.is_integer[old],
                lp.col_names[old]);
  for (int r = 0; r < lp.num_rows(); ++r) {
    std::vector<std::pair<int, double>> e;
    for (std::size_t p = lp.row_start[r]; p < lp.row_start[r + 1]; ++p)
      e.emplace_back(where[lp.row_index[p]], lp.row_value[p]);
    out.add_row(e, lp.row_lower[r], lp.row_upper[r], lp.row_names[r]);
  }
  return out;
}

void check_optimality(const LinearProgram& lp, const LpResult& r, const SolverOptions& o) {
  REQUIRE(r.status == LpStatus::Optimal);
  CHECK(check_point(lp, r.primal, 1e-6, 1.0).empty());
  CHECK(rel_close(r.objective, r.dual_objective));
  for (int j = 0; j < lp.num_cols(); ++j) {
    const double x = r.primal[j], d = r.reduced_cost[j];
    const double scale = 1e-6 * std::max(1.0, std::abs(lp.cost[j]));
    if (x > lp.col_lower[j] + 1e-7 && x < lp.col_upper[j] - 1e-7) CHECK(std::abs(d) <= scale + o.tol_opt);
    else if (x <= lp.col_lower[j] + 1e-7 && lp.col_upper[j] > lp.col_lower[j]) CHECK(d >= -scale);
    else if (x >= lp.col_upper[j] - 1e-7 && lp.col_upper[j] > lp.col_lower[j]) CHECK(d <= scale);
  }
}

GeneratedInstance zero_demand() {
  NetworkSets s;
  s.suppliers_main = 2;
  s.retailers = 2;
  s.periods = 2;
  s.modes = 2;
  s.scenarios = 2;
  return flat_instance(s, 0.0);
}

}  // namespace

TEST_SUITE("solver") {

TEST_CASE("small LP with a known optimum") {
  // max 3x + 2y  s.t. x + y <= 4, x + 3y <= 6, x <= 3  ->  x = 3, y = 1, value 11
  LinearProgram lp;
  lp.add_col(-3, 0, 3, false);
  lp.add_col(-2, 0, kInf, false);
  lp.add_row({{0, 1}, {1, 1}}, -kInf, 4);
  lp.add_row({{0, 1}, {1, 3}}, -kInf, 6);
  const auto r = solve_lp(lp);
  check_optimality(lp, r, {});
  CHECK(r.objective == doctest::Approx(-11));
  CHECK(r.primal[0] == doctest::Approx(3));
  CHECK(r.primal[1] == doctest::Approx(1));
}

TEST_CASE("ranged rows, free columns and equalities") {
  // min x - y  s.t.  1 <= x + y <= 5, x - y = -1 (x free), y <= 10
  LinearProgram lp;
  lp.add_col(1, -kInf, kInf, false);
  lp.add_col(-1, 0, 10, false);
  lp.add_row({{0, 1}, {1, 1}}, 1, 5);
  lp.add_row({{0, 1}, {1, -1}}, -1, -1);
  const auto r = solve_lp(lp);
  check_optimality(lp, r, {});
  CHECK(r.objective == doctest::Approx(-1));
}

TEST_CASE("infeasible and unbounded LPs") {
  LinearProgram inf;
  inf.add_col(1, 0, kInf, false);
  inf.add_row({{0, 1}}, 2, kInf);
  inf.add_row({{0, 1}}, -kInf, 1);
  CHECK(solve_lp(inf).status == LpStatus::Infeasible);

  LinearProgram unb;
  unb.add_col(-1, 0, kInf, false);
  unb.add_col(0, 0, kInf, false);
  unb.add_row({{0, 1}, {1, -1}}, -kInf, 1);
  CHECK(solve_lp(unb).status == LpStatus::Unbounded);
}

TEST_CASE("iteration limit is reported") {
  const auto g = generate_instance(1, paper_like_sets(), "paper-like");
  const MilpModel m = build_model(g.instance, g.scenarios, {});
  SolverOptions o;
  o.iteration_limit = 5;
  CHECK(solve_model_lp(m, o).status == LpStatus::IterationLimit);
}

TEST_CASE("zero demand model") {
  const auto g = zero_demand();
  const MilpModel m = build_model(g.instance, g.scenarios, {});
  const auto lp = solve_model_lp(m);
  check_optimality(m.lp, lp, {});
  CHECK(lp.objective == 0.0);
  for (double v : lp.primal) CHECK(v == 0.0);
  const auto mip = solve_model(m);
  CHECK(mip.status == MipStatus::Optimal);
  CHECK(mip.objective == 0.0);
}

TEST_CASE("cap zero with positive demand is infeasible") {
  NetworkSets s;
  s.periods = 2;
  auto g = flat_instance(s, 3.0);
  for (double& c : g.instance.cap) c = 0.0;
  const MilpModel m = build_model(g.instance, g.scenarios, {});
  CHECK(solve_model_lp(m).status == LpStatus::Infeasible);
  const auto mip = solve_model(m);
  CHECK(mip.status == MipStatus::Infeasible);
  CHECK_FALSE(mip.incumbent);
}

TEST_CASE("LP optimality certificates on generated instances") {
  for (const char* profile : {"paper-like", "severe"}) {
    NetworkSets s{2, 1, 2, 1, 2, 1, 3, 3, 2, 3};
    const auto g = generate_instance(9, s, profile);
    for (const StrategyConfig cfg :
         {StrategyConfig{}, StrategyConfig{true, true, true, true, true, true}}) {
      const MilpModel m = build_model(g.instance, g.scenarios, cfg);
      check_optimality(m.lp, solve_model_lp(m), {});
    }
  }
}

TEST_CASE("column permutation leaves optima unchanged") {
  const auto g = generate_instance(4, NetworkSets{2, 1, 1, 1, 2, 0, 2, 2, 2, 2}, "paper-like");
  const MilpModel m = build_model(g.instance, g.scenarios, {true, false, true, false, true, false});
  std::vector<int> perm(m.n_cols());
  std::iota(perm.begin(), perm.end(), 0);
  std::mt19937_64 eng(3);
  std::shuffle(perm.begin(), perm.end(), eng);
  const LinearProgram p = permuted(m.lp, perm);
  CHECK(rel_close(solve_lp(m.lp).objective, solve_lp(p).objective));
  CHECK(rel_close(solve_mip(m.lp).objective, solve_mip(p).objective));
}

TEST_CASE("branch and bound is deterministic and its bound never decreases") {
  const auto g = generate_instance(2, NetworkSets{3, 0, 2, 0, 2, 0, 3, 2, 2, 2}, "severe");
  const MilpModel m = build_model(g.instance, g.scenarios, {});
  SolverOptions o;
  o.seed = 7;
  const auto a = solve_model(m, o), b = solve_model(m, o);
  CHECK(a.status == MipStatus::Optimal);
  CHECK(a.nodes == b.nodes);
  CHECK(a.incumbent == b.incumbent);
  CHECK(a.objective == b.objective);
  CHECK(a.bound <= a.objective + 1e-9 * std::abs(a.objective));
  for (std::size_t k = 1; k < a.bound_trace.size(); ++k)
    CHECK(a.bound_trace[k] >= a.bound_trace[k - 1] - 1e-9 * std::abs(a.bound_trace[k - 1]));
  CHECK(solve_model_lp(m).objective <= a.objective + 1e-9 * std::abs(a.objective));

  o.branching = Branching::PseudoCost;
  CHECK(rel_close(solve_model(m, o).objective, a.objective));
}

TEST_CASE("node limit keeps incumbent and bound") {
  const auto g = generate_instance(1, paper_like_sets(), "paper-like");
  const MilpModel m = build_model(g.instance, g.scenarios, {});
  SolverOptions o;
  o.node_limit = 1;
  const auto r = solve_model(m, o);
  CHECK((r.status == MipStatus::NodeLimit || r.status == MipStatus::Optimal));
  REQUIRE(r.incumbent);
  CHECK(r.bound <= r.objective);
  CHECK(r.gap == doctest::Approx((r.objective - r.bound) / std::max(1.0, std::abs(r.objective))));
  CHECK(check_feasibility(m, *r.incumbent, 1e-6).empty());
}

TEST_CASE("tiny instances: LP bound below the enumerated optimum") {
  for (std::uint64_t seed : {1, 4, 5, 7, 10, 12, 16, 17, 18, 20}) {
    const TinyCase tc = random_tiny_case(seed);
    const MilpModel m = build_model(tc.instance, tc.scenarios, tc.strategies, tiny_options(tc));
    const auto orc = oracle::enumerate_optimal(tc.instance, tc.scenarios, tc.strategies,
                                               {tc.w_cost, tc.w_emission, false}, tc.max_flow);
    REQUIRE(orc.feasible);
    const auto lp = solve_model_lp(m);
    REQUIRE(lp.status == LpStatus::Optimal);
    CHECK(lp.objective <= orc.objective + 1e-9 * std::max(1.0, orc.objective));
  }
}

TEST_CASE("scaling every cost and emission scales the optimum") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const TinyCase tc = random_tiny_case(seed);
    const MilpModel m = build_model(tc.instance, tc.scenarios, tc.strategies, tiny_options(tc));
    Instance scaled = tc.instance;
    for (Tensor* t : {&scaled.transport_cost1, &scaled.transport_cost2, &scaled.transport_cost3,
                      &scaled.inv_cost, &scaled.short_cost, &scaled.emission_transport1,
                      &scaled.emission_transport2, &scaled.emission_transport3})
      for (double& v : t->data()) v *= 4;
    for (double* v : {&scaled.delay_cost, &scaled.info_setup, &scaled.info_training,
                      &scaled.stockpile_premium, &scaled.emission_saving})
      *v *= 4;
    for (auto* vec : {&scaled.setup_temp_mfg, &scaled.setup_temp_wh, &scaled.emission_prod})
      for (double& v : *vec) v *= 4;
    for (double& v : scaled.cap) v *= 4;
    const MilpModel ms = build_model(scaled, tc.scenarios, tc.strategies, tiny_options(tc));
    const auto a = solve_model(m), b = solve_model(ms);
    REQUIRE(a.status == b.status);
    if (a.incumbent) CHECK(rel_close(4 * a.objective, b.objective));
  }
}

TEST_CASE("identical scenarios collapse to the single-scenario optimum") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    TinyCase tc = random_tiny_case(seed);
    if (tc.instance.sets.scenarios != 2) continue;
    auto& sc = tc.scenarios;
    auto& in = tc.instance;
    for (double& v : sc.mfg_capacity_loss.data()) v = 0.0;
    for (double& v : sc.wh_capacity_loss.data()) v = 0.0;
    const auto copy_last_axis = [](Tensor& t) {
      for (std::size_t p = 0; p + 1 < t.size(); p += 2) t.data()[p + 1] = t.data()[p];
    };
    for (Tensor* t : {&sc.demand, &in.transport_cost1, &in.transport_cost2, &in.transport_cost3,
                      &in.transport_delay1, &in.transport_delay2, &in.transport_delay3,
                      &in.inv_cost, &in.short_cost})
      copy_last_axis(*t);

    TinyCase one = tc;
    NetworkSets s1 = in.sets;
    s1.scenarios = 1;
    one.instance.sets = s1;
    const auto first_slice = [](const Tensor& t) {
      auto shape = t.shape();
      shape.back() = 1;
      Tensor out(shape);
      for (std::size_t p = 0; p < out.size(); ++p) out.data()[p] = t.data()[2 * p];
      return out;
    };
    for (auto [dst, src] : {std::pair{&one.scenarios.demand, &sc.demand},
                            {&one.instance.transport_cost1, &in.transport_cost1},
                            {&one.instance.transport_cost2, &in.transport_cost2},
                            {&one.instance.transport_cost3, &in.transport_cost3},
                            {&one.instance.transport_delay1, &in.transport_delay1},
                            {&one.instance.transport_delay2, &in.transport_delay2},
                            {&one.instance.transport_delay3, &in.transport_delay3},
                            {&one.instance.inv_cost, &in.inv_cost},
                            {&one.instance.short_cost, &in.short_cost},
                            {&one.scenarios.mfg_capacity_loss, &sc.mfg_capacity_loss},
                            {&one.scenarios.wh_capacity_loss, &sc.wh_capacity_loss}})
      *dst = first_slice(*src);
    one.scenarios.probability = {1.0};

    const auto a = solve_model(build_model(tc.instance, tc.scenarios, tc.strategies, tiny_options(tc)));
    const auto b = solve_model(build_model(one.instance, one.scenarios, one.strategies, tiny_options(one)));
    CAPTURE(seed);
    REQUIRE(a.status == b.status);
    if (a.incumbent) CHECK(rel_close(a.objective, b.objective));
  }
}

}  // TEST_SUITE
