#pragma once

#include <cstdint>
#include <algorithm>
#include <random>
#include <vector>

#include "rgsc/formulation.hpp"
#include "rgsc/oracle.hpp"

namespace rgsc::testing {

inline Tensor& family_tensor(oracle::Assignment& a, Family f) {
  switch (f) {
    case Family::XX: return a.xx;
    case Family::YY: return a.yy;
    case Family::ZZ: return a.zz;
    case Family::U: return a.u;
    case Family::V: return a.v;
    case Family::X: return a.x;
    case Family::Y: return a.y;
    case Family::Z: return a.z;
    case Family::MI: return a.mi;
    case Family::MS: return a.ms;
    case Family::MSS: return a.mss;
    case Family::SP: return a.sp;
  }
  return a.xx;
}

inline double& entry(Tensor& t, const Index& idx) {
  switch (t.rank()) {
    case 1: return t(idx[0]);
    case 3: return t(idx[0], idx[1], idx[2]);
    case 4: return t(idx[0], idx[1], idx[2], idx[3]);
    default: return t(idx[0], idx[1], idx[2], idx[3], idx[4]);
  }
}

inline oracle::Assignment to_assignment(const MilpModel& model, const std::vector<double>& x) {
  oracle::Assignment a = oracle::empty_assignment(model.inputs->instance.sets);
  for (int c = 0; c < model.n_cols(); ++c) {
    const VarKey& k = model.var_map.key(c);
    entry(family_tensor(a, k.family), k.index) = x[c];
  }
  return a;
}

inline std::vector<double> to_point(const MilpModel& model, oracle::Assignment a) {
  std::vector<double> x(model.n_cols());
  for (int c = 0; c < model.n_cols(); ++c) {
    const VarKey& k = model.var_map.key(c);
    x[c] = entry(family_tensor(a, k.family), k.index);
  }
  return x;
}

struct TinyCase {
  Instance instance;
  ScenarioSet scenarios;
  StrategyConfig strategies;
  double w_cost = 1.0, w_emission = 1.0;
  int max_flow = 5;
};

/// Small integer data with dyadic probabilities and loss fractions, so every
/// objective is exact in floating point.
inline TinyCase random_tiny_case(std::uint64_t seed) {
  std::mt19937_64 eng(seed);
  auto pick = [&](int lo, int hi) { return lo + static_cast<int>(eng() % (hi - lo + 1)); };

  NetworkSets sets;
  sets.suppliers_main = pick(1, 2);
  sets.suppliers_backup = sets.suppliers_main == 1 ? pick(0, 1) : 0;
  sets.mfg_main = sets.wh_main = 1;
  sets.retailers = pick(1, 2);
  sets.periods = pick(1, 2);
  sets.modes = pick(1, 2);
  sets.scenarios = pick(1, 2);

  TinyCase tc;
  tc.max_flow = pick(3, 5);
  Instance& in = tc.instance;
  ScenarioSet& sc = tc.scenarios;
  in = make_empty_instance(sets);
  sc = make_empty_scenarios(sets);
  auto fill = [&](Tensor& t, int lo, int hi) {
    for (double& v : t.data()) v = pick(lo, hi);
  };
  fill(in.transport_cost1, 0, 9);
  fill(in.transport_cost2, 0, 9);
  fill(in.transport_cost3, 0, 9);
  fill(in.transport_delay1, 0, 3);
  fill(in.transport_delay2, 0, 3);
  fill(in.transport_delay3, 0, 3);
  fill(in.saved_time1, 0, 2);
  fill(in.saved_time2, 0, 2);
  fill(in.saved_time3, 0, 2);
  fill(in.inv_cost, 0, 3);
  fill(in.short_cost, 2, 12);
  fill(in.emission_transport1, 0, 3);
  fill(in.emission_transport2, 0, 3);
  fill(in.emission_transport3, 0, 3);
  in.delay_cost = pick(1, 3);
  in.info_setup = pick(0, 4);
  in.info_training = pick(0, 4);
  in.stockpile_premium = pick(0, 3);
  in.min_suppliers = 2;
  in.emission_saving = 1;
  for (double& v : in.emission_prod) v = pick(0, 2);
  for (double& v : in.mfg_capacity) v = pick(4, 8);
  for (double& v : in.wh_capacity) v = pick(4, 8);

  if (sets.scenarios == 2) {
    sc.probability = pick(0, 1) ? std::vector<double>{0.5, 0.5} : std::vector<double>{0.75, 0.25};
  } else {
    sc.probability = {1.0};
  }
  fill(sc.demand, 0, 3);
  const double losses[] = {0.0, 0.25};
  for (double& v : sc.mfg_capacity_loss.data()) v = losses[pick(0, 1)];
  for (double& v : sc.wh_capacity_loss.data()) v = losses[pick(0, 1)];
  for (double& v : in.cap) v = pick(10, 48);
  in.big_m = std::max(min_valid_big_m(sc), static_cast<double>(tc.max_flow));

  StrategyConfig& cfg = tc.strategies;
  cfg.backup_suppliers = sets.suppliers_backup > 0 && pick(0, 1);
  const int available = sets.suppliers_main + (cfg.backup_suppliers ? sets.suppliers_backup : 0);
  cfg.multiple_sourcing = available >= 2 && pick(0, 2) == 0;
  cfg.safety_stock = pick(0, 2) == 0;
  cfg.stockpiling = pick(0, 2) == 0;
  cfg.info_sharing = pick(0, 1);

  const double weights[][2] = {{1, 1}, {1, 0}, {2, 1}, {1, 3}};
  const int w = pick(0, 3);
  tc.w_cost = weights[w][0];
  tc.w_emission = weights[w][1];
  return tc;
}

inline ModelOptions tiny_options(const TinyCase& tc) {
  ModelOptions o;
  o.w_cost = tc.w_cost;
  o.w_emission = tc.w_emission;
  o.integrality = Integrality::Full;
  o.flow_upper = tc.max_flow;
  return o;
}

/// Hand-sized instance: every cost, delay and emission entry equal to
/// `unit`, one scenario per probability, uniform demand, ample capacity.
inline GeneratedInstance flat_instance(const NetworkSets& sets, double demand, double unit = 1.0) {
  GeneratedInstance g{make_empty_instance(sets), make_empty_scenarios(sets)};
  Instance& in = g.instance;
  for (Tensor* t : {&in.transport_cost1, &in.transport_cost2, &in.transport_cost3,
                    &in.transport_delay1, &in.transport_delay2, &in.transport_delay3,
                    &in.emission_transport1, &in.emission_transport2, &in.emission_transport3,
                    &in.inv_cost, &in.short_cost})
    for (double& v : t->data()) v = unit;
  in.delay_cost = unit;
  for (double& v : in.emission_prod) v = unit;
  for (double& v : in.mfg_capacity) v = 100 * (demand + 1);
  for (double& v : in.wh_capacity) v = 100 * (demand + 1);
  for (double& v : in.cap) v = 1e6;
  for (double& v : in.setup_temp_mfg) v = unit;
  for (double& v : in.setup_temp_wh) v = unit;
  in.min_suppliers = 2;
  g.scenarios.probability.assign(sets.scenarios, 1.0 / sets.scenarios);
  for (double& v : g.scenarios.demand.data()) v = demand;
  in.big_m = std::max(1.0, min_valid_big_m(g.scenarios));
  return g;
}

}  // namespace rgsc::testing
