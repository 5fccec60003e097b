#include "rgsc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "rgsc/errors.hpp"

namespace rgsc {

namespace {

using Shape = std::vector<std::size_t>;

std::size_t sz(int n) { return static_cast<std::size_t>(std::max(n, 0)); }

struct Shapes {
  Shape link1, link2, link3;          // with mode and scenario
  Shape static1, static2, static3;    // with mode only
  Shape per_mfg_scen, per_wh_scen;
  Shape demand;
};

Shapes shapes_for(const NetworkSets& s) {
  const auto I = sz(s.suppliers()), J = sz(s.manufacturers()), K = sz(s.warehouses());
  const auto M = sz(s.retailers), T = sz(s.periods), L = sz(s.modes), S = sz(s.scenarios);
  return Shapes{{I, J, L, S}, {J, K, L, S}, {K, M, L, S}, {I, J, L}, {J, K, L}, {K, M, L},
                {J, S},       {K, S},       {M, T, S}};
}

std::string shape_str(const Shape& shape) {
  std::string out = "[";
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out += "x";
    out += std::to_string(shape[i]);
  }
  return out + "]";
}

class Checker {
 public:
  explicit Checker(ValidationReport& report) : report_(report) {}

  void add(std::string code, std::string detail) {
    report_.push_back({std::move(code), std::move(detail)});
  }

  bool shape(const std::string& name, const Tensor& t, const Shape& expected) {
    if (t.shape() != expected) {
      add("dimension", name + " has shape " + shape_str(t.shape()) + ", expected " +
                           shape_str(expected));
      return false;
    }
    return true;
  }

  bool length(const std::string& name, std::size_t got, std::size_t expected) {
    if (got != expected) {
      add("dimension", name + " has " + std::to_string(got) + " entries, expected " +
                           std::to_string(expected));
      return false;
    }
    return true;
  }

  void nonneg(const std::string& name, double v) {
    if (!(v >= 0.0) || !std::isfinite(v))
      add("negative-value", name + " = " + std::to_string(v));
  }

  void nonneg(const std::string& name, const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (!(values[i] >= 0.0) || !std::isfinite(values[i])) {
        add("negative-value", name + "[" + std::to_string(i) + "] = " + std::to_string(values[i]));
        return;
      }
    }
  }

  void nonneg_tensor(const std::string& name, const Tensor& t, const Shape& expected) {
    if (shape(name, t, expected)) nonneg(name, t.data());
  }

 private:
  ValidationReport& report_;
};

}  // namespace

bool has_violation(const ValidationReport& report, const std::string& code) {
  return std::any_of(report.begin(), report.end(),
                     [&](const Violation& v) { return v.code == code; });
}

double min_valid_big_m(const ScenarioSet& scen) {
  if (scen.demand.rank() != 3) return 0.0;
  const auto M = scen.demand.dim(0), T = scen.demand.dim(1), S = scen.demand.dim(2);
  double best = 0.0;
  for (std::size_t s = 0; s < S; ++s) {
    double total = 0.0;
    for (std::size_t m = 0; m < M; ++m)
      for (std::size_t t = 0; t < T; ++t) total += scen.demand(m, t, s);
    best = std::max(best, total);
  }
  return best;
}

ValidationReport validate_instance(const Instance& inst, const ScenarioSet& scen) {
  ValidationReport report;
  Checker check(report);
  const NetworkSets& s = inst.sets;

  bool counts_ok = true;
  auto count = [&](const char* name, int v, int min) {
    if (v < min) {
      check.add("count", std::string(name) + " = " + std::to_string(v) + " (minimum " +
                             std::to_string(min) + ")");
      counts_ok = false;
    }
  };
  count("suppliers_main", s.suppliers_main, 1);
  count("suppliers_backup", s.suppliers_backup, 0);
  count("mfg_main", s.mfg_main, 1);
  count("mfg_temp", s.mfg_temp, 0);
  count("wh_main", s.wh_main, 1);
  count("wh_temp", s.wh_temp, 0);
  count("retailers", s.retailers, 1);
  count("periods", s.periods, 1);
  count("modes", s.modes, 1);
  count("scenarios", s.scenarios, 1);
  if (!counts_ok) return report;

  const Shapes sh = shapes_for(s);
  check.nonneg_tensor("transport_cost1", inst.transport_cost1, sh.link1);
  check.nonneg_tensor("transport_cost2", inst.transport_cost2, sh.link2);
  check.nonneg_tensor("transport_cost3", inst.transport_cost3, sh.link3);
  check.nonneg_tensor("transport_delay1", inst.transport_delay1, sh.link1);
  check.nonneg_tensor("transport_delay2", inst.transport_delay2, sh.link2);
  check.nonneg_tensor("transport_delay3", inst.transport_delay3, sh.link3);
  check.nonneg_tensor("saved_time1", inst.saved_time1, sh.static1);
  check.nonneg_tensor("saved_time2", inst.saved_time2, sh.static2);
  check.nonneg_tensor("saved_time3", inst.saved_time3, sh.static3);
  check.nonneg_tensor("emission_transport1", inst.emission_transport1, sh.static1);
  check.nonneg_tensor("emission_transport2", inst.emission_transport2, sh.static2);
  check.nonneg_tensor("emission_transport3", inst.emission_transport3, sh.static3);
  check.nonneg_tensor("inv_cost", inst.inv_cost, sh.per_mfg_scen);
  check.nonneg_tensor("short_cost", inst.short_cost, sh.per_mfg_scen);

  if (check.length("setup_temp_mfg", inst.setup_temp_mfg.size(), sz(s.mfg_temp)))
    check.nonneg("setup_temp_mfg", inst.setup_temp_mfg);
  if (check.length("setup_temp_wh", inst.setup_temp_wh.size(), sz(s.wh_temp)))
    check.nonneg("setup_temp_wh", inst.setup_temp_wh);
  if (check.length("mfg_capacity", inst.mfg_capacity.size(), sz(s.manufacturers())))
    check.nonneg("mfg_capacity", inst.mfg_capacity);
  if (check.length("wh_capacity", inst.wh_capacity.size(), sz(s.warehouses())))
    check.nonneg("wh_capacity", inst.wh_capacity);
  if (check.length("emission_prod", inst.emission_prod.size(), sz(s.manufacturers())))
    check.nonneg("emission_prod", inst.emission_prod);
  if (inst.cap.size() != sz(s.periods))
    check.add("cap-length", "cap has " + std::to_string(inst.cap.size()) + " entries, expected " +
                                std::to_string(s.periods));
  else
    check.nonneg("cap", inst.cap);

  check.nonneg("delay_cost", inst.delay_cost);
  check.nonneg("info_setup", inst.info_setup);
  check.nonneg("info_training", inst.info_training);
  check.nonneg("stockpile_premium", inst.stockpile_premium);
  check.nonneg("emission_saving", inst.emission_saving);
  if (inst.min_suppliers < 1)
    check.add("count", "min_suppliers = " + std::to_string(inst.min_suppliers));

  // scenarios
  if (check.length("probability", scen.probability.size(), sz(s.scenarios))) {
    double sum = 0.0;
    for (std::size_t i = 0; i < scen.probability.size(); ++i) {
      const double p = scen.probability[i];
      if (!(p >= 0.0)) check.add("probability-negative", "probability[" + std::to_string(i) + "]");
      sum += p;
    }
    if (!(std::abs(sum - 1.0) <= 1e-12)) {
      std::ostringstream os;
      os.precision(17);
      os << "probabilities sum to " << sum;
      check.add("probability-sum", os.str());
    }
  }
  if (check.shape("demand", scen.demand, sh.demand)) check.nonneg("demand", scen.demand.data());

  auto loss_range = [&](const char* name, const Tensor& t, const Shape& expected) {
    if (!check.shape(name, t, expected)) return;
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double r = t.data()[i];
      if (!(r >= 0.0 && r <= 1.0)) {
        check.add("capacity-loss-range",
                  std::string(name) + " entry " + std::to_string(i) + " = " + std::to_string(r));
        return;
      }
    }
  };
  loss_range("mfg_capacity_loss", scen.mfg_capacity_loss, sh.per_mfg_scen);
  loss_range("wh_capacity_loss", scen.wh_capacity_loss, sh.per_wh_scen);

  if (scen.demand.shape() == sh.demand) {
    const double need = min_valid_big_m(scen);
    if (!(inst.big_m > 0.0) || inst.big_m < need) {
      std::ostringstream os;
      os << "big_m = " << inst.big_m << " is below the cumulative demand bound " << need;
      check.add("big-m", os.str());
    }
  }
  return report;
}

ValidationReport validate_strategies(const Instance& inst, const StrategyConfig& cfg) {
  ValidationReport report;
  if (cfg.multiple_sourcing) {
    const int available = inst.sets.suppliers_main +
                          (cfg.backup_suppliers ? inst.sets.suppliers_backup : 0);
    if (inst.min_suppliers < 2)
      report.push_back({"min-suppliers", "multiple sourcing requires min_suppliers >= 2, got " +
                                             std::to_string(inst.min_suppliers)});
    else if (inst.min_suppliers > available)
      report.push_back({"min-suppliers", "min_suppliers = " + std::to_string(inst.min_suppliers) +
                                             " exceeds the " + std::to_string(available) +
                                             " available suppliers"});
  }
  return report;
}

Instance make_empty_instance(const NetworkSets& sets) {
  const Shapes sh = shapes_for(sets);
  Instance inst;
  inst.sets = sets;
  inst.transport_cost1 = Tensor(sh.link1);
  inst.transport_cost2 = Tensor(sh.link2);
  inst.transport_cost3 = Tensor(sh.link3);
  inst.transport_delay1 = Tensor(sh.link1);
  inst.transport_delay2 = Tensor(sh.link2);
  inst.transport_delay3 = Tensor(sh.link3);
  inst.saved_time1 = Tensor(sh.static1);
  inst.saved_time2 = Tensor(sh.static2);
  inst.saved_time3 = Tensor(sh.static3);
  inst.emission_transport1 = Tensor(sh.static1);
  inst.emission_transport2 = Tensor(sh.static2);
  inst.emission_transport3 = Tensor(sh.static3);
  inst.inv_cost = Tensor(sh.per_mfg_scen);
  inst.short_cost = Tensor(sh.per_mfg_scen);
  inst.setup_temp_mfg.assign(sz(sets.mfg_temp), 0.0);
  inst.setup_temp_wh.assign(sz(sets.wh_temp), 0.0);
  inst.mfg_capacity.assign(sz(sets.manufacturers()), 0.0);
  inst.wh_capacity.assign(sz(sets.warehouses()), 0.0);
  inst.emission_prod.assign(sz(sets.manufacturers()), 0.0);
  inst.cap.assign(sz(sets.periods), 0.0);
  return inst;
}

ScenarioSet make_empty_scenarios(const NetworkSets& sets) {
  const Shapes sh = shapes_for(sets);
  ScenarioSet scen;
  scen.probability.assign(sz(sets.scenarios), sets.scenarios > 0 ? 1.0 / sets.scenarios : 0.0);
  scen.demand = Tensor(sh.demand);
  scen.mfg_capacity_loss = Tensor(sh.per_mfg_scen);
  scen.wh_capacity_loss = Tensor(sh.per_wh_scen);
  return scen;
}

NetworkSets paper_like_sets() {
  NetworkSets s;
  s.suppliers_main = 5;
  s.suppliers_backup = 3;
  s.mfg_main = 3;
  s.mfg_temp = 3;
  s.wh_main = 5;
  s.wh_temp = 3;
  s.retailers = 7;
  s.periods = 6;
  s.modes = 2;
  s.scenarios = 4;
  return s;
}

}  // namespace rgsc
