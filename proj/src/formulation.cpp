#include "rgsc/formulation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <stdexcept>

#include "rgsc/errors.hpp"

namespace rgsc {

std::string to_string(CapMode m) { return m == CapMode::Literal ? "literal" : "perscenario"; }
std::string to_string(DelayMode m) { return m == DelayMode::Literal ? "literal" : "expected"; }
std::string to_string(Integrality m) { return m == Integrality::Full ? "full" : "relaxed"; }

CapMode parse_cap_mode(const std::string& s) {
  if (s == "perscenario") return CapMode::PerScenario;
  if (s == "literal") return CapMode::Literal;
  throw std::invalid_argument("unknown cap mode '" + s + "'");
}
DelayMode parse_delay_mode(const std::string& s) {
  if (s == "expected") return DelayMode::Expected;
  if (s == "literal") return DelayMode::Literal;
  throw std::invalid_argument("unknown delay mode '" + s + "'");
}
Integrality parse_integrality(const std::string& s) {
  if (s == "relaxed") return Integrality::Relaxed;
  if (s == "full") return Integrality::Full;
  throw std::invalid_argument("unknown integrality mode '" + s + "'");
}

namespace {

struct FamilyInfo {
  const char* name;
  const char* labels;
  const char* mps_prefix;
};

constexpr FamilyInfo kFamilies[kNumFamilies] = {
    {"XX", "ijtl", "XX"}, {"YY", "jktl", "YY"}, {"ZZ", "kmtl", "ZZ"}, {"U", "j", "U"},
    {"V", "k", "V"},      {"X", "ijtls", "X"},  {"Y", "jktls", "Y"},  {"Z", "kmtls", "Z"},
    {"MI", "jts", "MI"},  {"MS", "jts", "MS"},  {"MSS", "jts", "MSS"}, {"SP", "jts", "SP"},
};

constexpr FamilyInfo kRowFamilies[kNumRowFamilies] = {
    {"link-x", "ijtls", "LX"},
    {"link-y", "jktls", "LY"},
    {"link-z", "kmtls", "LZ"},
    {"single-mode-x", "ijt", "MX"},
    {"single-mode-y", "jkt", "MY"},
    {"single-mode-z", "kmt", "MZ"},
    {"balance", "jts", "BAL"},
    {"warehouse-flow", "kts", "WHF"},
    {"demand", "mts", "DEM"},
    {"emission-cap", "ts", "CAP"},
    {"min-suppliers", "jt", "MSU"},
    {"mfg-capacity", "jts", "CPM"},
    {"wh-capacity", "kts", "CPW"},
    {"open-mfg", "jktl", "OPM"},
    {"open-wh-in", "jktl", "OPI"},
    {"open-wh-out", "kmtl", "OPO"},
};

std::string mps_name(const char* prefix, long ordinal) {
  const int width = 8 - static_cast<int>(std::char_traits<char>::length(prefix));
  std::string digits = std::to_string(ordinal);
  if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
  return prefix + digits;
}

std::string describe_index(const char* labels, const Index& idx) {
  std::string out = "(";
  for (int p = 0; labels[p]; ++p) {
    if (p) out += ",";
    out += labels[p];
    out += "=" + std::to_string(idx[p] + 1);
  }
  return out + ")";
}

/// Active entity counts for a strategy configuration.
struct Active {
  int suppliers, mfg, wh;
  Active(const NetworkSets& s, const StrategyConfig& c)
      : suppliers(s.suppliers_main + (c.backup_suppliers ? s.suppliers_backup : 0)),
        mfg(s.mfg_main + (c.temporary_facilities ? s.mfg_temp : 0)),
        wh(s.wh_main + (c.temporary_facilities ? s.wh_temp : 0)) {}
};

/// Per-unit emission after the information-sharing reduction.
struct EmissionRates {
  const Instance& inst;
  bool info;
  double transport(double e) const { return info ? std::max(0.0, e - inst.emission_saving) : e; }
  double x(int i, int j, int l) const { return transport(inst.emission_transport1(i, j, l)); }
  double y(int j, int k, int l) const {
    return inst.emission_prod[j] + transport(inst.emission_transport2(j, k, l));
  }
  double z(int k, int m, int l) const { return transport(inst.emission_transport3(k, m, l)); }
};

/// Dc * sum_s w_s * max(0, delay - saved) for one link.
double delay_coefficient(const Instance& inst, const ScenarioSet& scen, const Tensor& delay,
                         const Tensor& saved, int o, int d, int l, bool info, DelayMode mode) {
  double sum = 0.0;
  for (int s = 0; s < inst.sets.scenarios; ++s) {
    const double w = mode == DelayMode::Expected ? scen.probability[s] : 1.0;
    const double net = delay(o, d, l, s) - (info ? saved(o, d, l) : 0.0);
    sum += w * std::max(0.0, net);
  }
  return inst.delay_cost * sum;
}

}  // namespace

const char* family_name(Family f) { return kFamilies[static_cast<int>(f)].name; }
const char* family_labels(Family f) { return kFamilies[static_cast<int>(f)].labels; }
const char* row_family_name(RowFamily f) { return kRowFamilies[static_cast<int>(f)].name; }
const char* row_family_labels(RowFamily f) { return kRowFamilies[static_cast<int>(f)].labels; }

std::string describe(const VarKey& key) {
  return std::string(family_name(key.family)) + describe_index(family_labels(key.family), key.index);
}
std::string describe(const RowTag& tag) {
  return std::string(row_family_name(tag.family)) +
         describe_index(row_family_labels(tag.family), tag.index);
}

VariableMap::VariableMap(const NetworkSets& s) {
  const int I = s.suppliers(), J = s.manufacturers(), K = s.warehouses();
  const int M = s.retailers, T = s.periods, L = s.modes, S = s.scenarios;
  auto set = [&](Family f, std::array<int, 5> d) {
    dims_[static_cast<int>(f)] = d;
    std::size_t n = 1;
    for (int v : d) n *= static_cast<std::size_t>(v);
    grid_[static_cast<int>(f)].assign(n, -1);
  };
  set(Family::XX, {I, J, T, L, 1});
  set(Family::YY, {J, K, T, L, 1});
  set(Family::ZZ, {K, M, T, L, 1});
  set(Family::U, {J, 1, 1, 1, 1});
  set(Family::V, {K, 1, 1, 1, 1});
  set(Family::X, {I, J, T, L, S});
  set(Family::Y, {J, K, T, L, S});
  set(Family::Z, {K, M, T, L, S});
  set(Family::MI, {J, T, S, 1, 1});
  set(Family::MS, {J, T, S, 1, 1});
  set(Family::MSS, {J, T, S, 1, 1});
  set(Family::SP, {J, T, S, 1, 1});
}

std::size_t VariableMap::slot(Family f, const Index& idx) const {
  const auto& d = dims_[static_cast<int>(f)];
  std::size_t off = 0;
  for (int p = 0; p < 5; ++p) {
    if (idx[p] < 0 || idx[p] >= d[p]) return static_cast<std::size_t>(-1);
    off = off * static_cast<std::size_t>(d[p]) + static_cast<std::size_t>(idx[p]);
  }
  return off;
}

int VariableMap::add(const VarKey& key) {
  const std::size_t s = slot(key.family, key.index);
  if (s == static_cast<std::size_t>(-1)) throw std::out_of_range("variable index out of range");
  auto& cell = grid_[static_cast<int>(key.family)][s];
  if (cell >= 0) throw std::logic_error("duplicate variable " + describe(key));
  cell = size();
  keys_.push_back(key);
  return cell;
}

int VariableMap::col(const VarKey& key) const {
  const std::size_t s = slot(key.family, key.index);
  if (s == static_cast<std::size_t>(-1)) return -1;
  return grid_[static_cast<int>(key.family)][s];
}

int VariableMap::col(Family f, int a, int b, int c, int d, int e) const {
  return col(VarKey{f, {a, b, c, d, e}});
}

int VariableMap::family_count(Family f) const {
  return static_cast<int>(std::count_if(keys_.begin(), keys_.end(),
                                        [f](const VarKey& k) { return k.family == f; }));
}

MilpModel build_model(const Instance& inst, const ScenarioSet& scen, const StrategyConfig& cfg,
                      const ModelOptions& opts) {
  if (const auto report = validate_instance(inst, scen); !report.empty())
    throw std::invalid_argument("invalid instance: " + report.front().code + ": " +
                                report.front().detail);
  if (const auto report = validate_strategies(inst, cfg); !report.empty())
    throw ConfigError(report.front().detail);
  if (!(opts.w_cost >= 0.0) || !(opts.w_emission >= 0.0) ||
      (opts.w_cost == 0.0 && opts.w_emission == 0.0))
    throw ConfigError("objective weights must be nonnegative and not both zero");
  if (!(opts.flow_upper > 0.0)) throw ConfigError("flow upper bound must be positive");

  MilpModel model;
  model.inputs = std::make_shared<const ModelInputs>(ModelInputs{inst, scen, cfg, opts});
  model.var_map = VariableMap(inst.sets);
  model.w_cost = opts.w_cost;
  model.w_emission = opts.w_emission;

  const NetworkSets& sets = inst.sets;
  const Active act(sets, cfg);
  const int M = sets.retailers, T = sets.periods, L = sets.modes, S = sets.scenarios;
  const bool info = cfg.info_sharing;
  const EmissionRates em{inst, info};
  const bool int_flows = opts.integrality == Integrality::Full;

  VariableMap& vm = model.var_map;
  LinearProgram& lp = model.lp;
  std::array<long, kNumFamilies> col_ordinal{};
  std::array<long, kNumRowFamilies> row_ordinal{};

  auto add_col = [&](Family f, Index idx, double cost, double emission, bool binary) {
    const int c = vm.add({f, idx});
    const double ub = binary ? 1.0 : opts.flow_upper;
    const auto fi = static_cast<int>(f);
    lp.add_col(0.0, 0.0, ub, binary || int_flows,
               mps_name(kFamilies[fi].mps_prefix, ++col_ordinal[fi]));
    model.objective_cost.push_back(cost);
    model.objective_emission.push_back(emission);
    return c;
  };

  // First stage: link binaries carry the delay cost.
  for (int i = 0; i < act.suppliers; ++i)
    for (int j = 0; j < act.mfg; ++j)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          add_col(Family::XX, {i, j, t, l},
                  delay_coefficient(inst, scen, inst.transport_delay1, inst.saved_time1, i, j, l,
                                    info, opts.delay_mode),
                  0.0, true);
  for (int j = 0; j < act.mfg; ++j)
    for (int k = 0; k < act.wh; ++k)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          add_col(Family::YY, {j, k, t, l},
                  delay_coefficient(inst, scen, inst.transport_delay2, inst.saved_time2, j, k, l,
                                    info, opts.delay_mode),
                  0.0, true);
  for (int k = 0; k < act.wh; ++k)
    for (int m = 0; m < M; ++m)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          add_col(Family::ZZ, {k, m, t, l},
                  delay_coefficient(inst, scen, inst.transport_delay3, inst.saved_time3, k, m, l,
                                    info, opts.delay_mode),
                  0.0, true);
  if (cfg.temporary_facilities) {
    for (int j = sets.mfg_main; j < act.mfg; ++j)
      add_col(Family::U, {j}, inst.setup_temp_mfg[j - sets.mfg_main], 0.0, true);
    for (int k = sets.wh_main; k < act.wh; ++k)
      add_col(Family::V, {k}, inst.setup_temp_wh[k - sets.wh_main], 0.0, true);
  }

  // Second stage.
  for (int i = 0; i < act.suppliers; ++i)
    for (int j = 0; j < act.mfg; ++j)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          for (int s = 0; s < S; ++s) {
            const double p = scen.probability[s];
            add_col(Family::X, {i, j, t, l, s}, p * inst.transport_cost1(i, j, l, s),
                    p * em.x(i, j, l), false);
          }
  for (int j = 0; j < act.mfg; ++j)
    for (int k = 0; k < act.wh; ++k)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          for (int s = 0; s < S; ++s) {
            const double p = scen.probability[s];
            add_col(Family::Y, {j, k, t, l, s}, p * inst.transport_cost2(j, k, l, s),
                    p * em.y(j, k, l), false);
          }
  for (int k = 0; k < act.wh; ++k)
    for (int m = 0; m < M; ++m)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          for (int s = 0; s < S; ++s) {
            const double p = scen.probability[s];
            add_col(Family::Z, {k, m, t, l, s}, p * inst.transport_cost3(k, m, l, s),
                    p * em.z(k, m, l), false);
          }
  auto per_mfg = [&](Family f, auto unit_cost) {
    for (int j = 0; j < act.mfg; ++j)
      for (int t = 0; t < T; ++t)
        for (int s = 0; s < S; ++s)
          add_col(f, {j, t, s}, scen.probability[s] * unit_cost(j, s), 0.0, false);
  };
  per_mfg(Family::MI, [&](int j, int s) { return inst.inv_cost(j, s); });
  per_mfg(Family::MS, [&](int j, int s) { return inst.short_cost(j, s); });
  if (cfg.safety_stock) per_mfg(Family::MSS, [&](int j, int s) { return inst.inv_cost(j, s); });
  if (cfg.stockpiling) per_mfg(Family::SP, [&](int, int) { return inst.stockpile_premium; });

  if (info) model.cost_constant = inst.info_setup + inst.info_training;

  lp.cost.resize(vm.size());
  for (int c = 0; c < vm.size(); ++c)
    lp.cost[c] = opts.w_cost * model.objective_cost[c] + opts.w_emission * model.objective_emission[c];
  lp.objective_offset = opts.w_cost * model.cost_constant;

  // Rows.
  using Entries = std::vector<std::pair<int, double>>;
  auto add_row = [&](RowFamily f, Index idx, const Entries& entries, Relation rel, double rhs) {
    const double lo = rel == Relation::LessEqual ? -kInf : rhs;
    const double hi = rel == Relation::GreaterEqual ? kInf : rhs;
    const auto fi = static_cast<int>(f);
    lp.add_row(entries, lo, hi, mps_name(kRowFamilies[fi].mps_prefix, ++row_ordinal[fi]));
    model.relation.push_back(rel);
    model.rhs.push_back(rhs);
    model.row_tags.push_back({f, idx});
  };
  auto col = [&](Family f, int a, int b = 0, int c = 0, int d = 0, int e = 0) {
    return vm.col(f, a, b, c, d, e);
  };
  const double big_m = inst.big_m;

  // (a) linking
  for (int i = 0; i < act.suppliers; ++i)
    for (int j = 0; j < act.mfg; ++j)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          for (int s = 0; s < S; ++s)
            add_row(RowFamily::LinkX, {i, j, t, l, s},
                    {{col(Family::X, i, j, t, l, s), 1.0}, {col(Family::XX, i, j, t, l), -big_m}},
                    Relation::LessEqual, 0.0);
  for (int j = 0; j < act.mfg; ++j)
    for (int k = 0; k < act.wh; ++k)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          for (int s = 0; s < S; ++s)
            add_row(RowFamily::LinkY, {j, k, t, l, s},
                    {{col(Family::Y, j, k, t, l, s), 1.0}, {col(Family::YY, j, k, t, l), -big_m}},
                    Relation::LessEqual, 0.0);
  for (int k = 0; k < act.wh; ++k)
    for (int m = 0; m < M; ++m)
      for (int t = 0; t < T; ++t)
        for (int l = 0; l < L; ++l)
          for (int s = 0; s < S; ++s)
            add_row(RowFamily::LinkZ, {k, m, t, l, s},
                    {{col(Family::Z, k, m, t, l, s), 1.0}, {col(Family::ZZ, k, m, t, l), -big_m}},
                    Relation::LessEqual, 0.0);

  // (b) single mode per link and period
  auto single_mode = [&](RowFamily f, Family bin, int n_orig, int n_dest) {
    for (int o = 0; o < n_orig; ++o)
      for (int d = 0; d < n_dest; ++d)
        for (int t = 0; t < T; ++t) {
          Entries e;
          for (int l = 0; l < L; ++l) e.emplace_back(col(bin, o, d, t, l), 1.0);
          add_row(f, {o, d, t}, e, Relation::LessEqual, 1.0);
        }
  };
  single_mode(RowFamily::ModeX, Family::XX, act.suppliers, act.mfg);
  single_mode(RowFamily::ModeY, Family::YY, act.mfg, act.wh);
  single_mode(RowFamily::ModeZ, Family::ZZ, act.wh, M);

  // (c) manufacturer balance:
  //   inflow + MI(t-1) + MS(t) [+ MSS(t-1)] [+ SP(t)]
  //     = outflow + MI(t) + MS(t-1) [+ MSS(t)]
  for (int j = 0; j < act.mfg; ++j)
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < S; ++s) {
        Entries e;
        for (int i = 0; i < act.suppliers; ++i)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::X, i, j, t, l, s), 1.0);
        for (int k = 0; k < act.wh; ++k)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Y, j, k, t, l, s), -1.0);
        if (t > 0) e.emplace_back(col(Family::MI, j, t - 1, s), 1.0);
        e.emplace_back(col(Family::MI, j, t, s), -1.0);
        e.emplace_back(col(Family::MS, j, t, s), 1.0);
        if (t > 0) e.emplace_back(col(Family::MS, j, t - 1, s), -1.0);
        if (cfg.safety_stock) {
          if (t > 0) e.emplace_back(col(Family::MSS, j, t - 1, s), 1.0);
          e.emplace_back(col(Family::MSS, j, t, s), -1.0);
        }
        if (cfg.stockpiling) e.emplace_back(col(Family::SP, j, t, s), 1.0);
        add_row(RowFamily::Balance, {j, t, s}, e, Relation::Equal, 0.0);
      }

  // (d) warehouse flow-through
  for (int k = 0; k < act.wh; ++k)
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < S; ++s) {
        Entries e;
        for (int j = 0; j < act.mfg; ++j)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Y, j, k, t, l, s), 1.0);
        for (int m = 0; m < M; ++m)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Z, k, m, t, l, s), -1.0);
        add_row(RowFamily::WarehouseFlow, {k, t, s}, e, Relation::Equal, 0.0);
      }

  // (e) demand
  for (int m = 0; m < M; ++m)
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < S; ++s) {
        Entries e;
        for (int k = 0; k < act.wh; ++k)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Z, k, m, t, l, s), 1.0);
        add_row(RowFamily::Demand, {m, t, s}, e, Relation::Equal, scen.demand(m, t, s));
      }

  // (f) emission cap
  auto emission_terms = [&](Entries& e, int t, int s) {
    for (int i = 0; i < act.suppliers; ++i)
      for (int j = 0; j < act.mfg; ++j)
        for (int l = 0; l < L; ++l) e.emplace_back(col(Family::X, i, j, t, l, s), em.x(i, j, l));
    for (int j = 0; j < act.mfg; ++j)
      for (int k = 0; k < act.wh; ++k)
        for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Y, j, k, t, l, s), em.y(j, k, l));
    for (int k = 0; k < act.wh; ++k)
      for (int m = 0; m < M; ++m)
        for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Z, k, m, t, l, s), em.z(k, m, l));
  };
  for (int t = 0; t < T; ++t) {
    if (opts.cap_mode == CapMode::Literal) {
      Entries e;
      for (int s = 0; s < S; ++s) emission_terms(e, t, s);
      add_row(RowFamily::EmissionCap, {t}, e, Relation::LessEqual, inst.cap[t]);
    } else {
      for (int s = 0; s < S; ++s) {
        Entries e;
        emission_terms(e, t, s);
        add_row(RowFamily::EmissionCap, {t, s}, e, Relation::LessEqual, inst.cap[t]);
      }
    }
  }

  // (g) minimum number of suppliers, aggregated over modes
  if (cfg.multiple_sourcing)
    for (int j = 0; j < act.mfg; ++j)
      for (int t = 0; t < T; ++t) {
        Entries e;
        for (int i = 0; i < act.suppliers; ++i)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::XX, i, j, t, l), 1.0);
        add_row(RowFamily::MinSuppliers, {j, t}, e, Relation::GreaterEqual, inst.min_suppliers);
      }

  // (h) per-facility reduced capacity
  for (int j = 0; j < act.mfg; ++j)
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < S; ++s) {
        Entries e;
        for (int k = 0; k < act.wh; ++k)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Y, j, k, t, l, s), 1.0);
        add_row(RowFamily::MfgCapacity, {j, t, s}, e, Relation::LessEqual,
                inst.mfg_capacity[j] * (1.0 - scen.mfg_capacity_loss(j, s)));
      }
  for (int k = 0; k < act.wh; ++k)
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < S; ++s) {
        Entries e;
        for (int m = 0; m < M; ++m)
          for (int l = 0; l < L; ++l) e.emplace_back(col(Family::Z, k, m, t, l, s), 1.0);
        add_row(RowFamily::WhCapacity, {k, t, s}, e, Relation::LessEqual,
                inst.wh_capacity[k] * (1.0 - scen.wh_capacity_loss(k, s)));
      }

  // (i) temporary facilities open only when used
  if (cfg.temporary_facilities) {
    for (int j = sets.mfg_main; j < act.mfg; ++j)
      for (int k = 0; k < act.wh; ++k)
        for (int t = 0; t < T; ++t)
          for (int l = 0; l < L; ++l)
            add_row(RowFamily::OpenMfg, {j, k, t, l},
                    {{col(Family::YY, j, k, t, l), 1.0}, {col(Family::U, j), -1.0}},
                    Relation::LessEqual, 0.0);
    for (int k = sets.wh_main; k < act.wh; ++k) {
      for (int j = 0; j < act.mfg; ++j)
        for (int t = 0; t < T; ++t)
          for (int l = 0; l < L; ++l)
            add_row(RowFamily::OpenWhIn, {j, k, t, l},
                    {{col(Family::YY, j, k, t, l), 1.0}, {col(Family::V, k), -1.0}},
                    Relation::LessEqual, 0.0);
      for (int m = 0; m < M; ++m)
        for (int t = 0; t < T; ++t)
          for (int l = 0; l < L; ++l)
            add_row(RowFamily::OpenWhOut, {k, m, t, l},
                    {{col(Family::ZZ, k, m, t, l), 1.0}, {col(Family::V, k), -1.0}},
                    Relation::LessEqual, 0.0);
    }
  }
  return model;
}

ModelStats model_stats(const MilpModel& model) {
  ModelStats st;
  st.cols = model.n_cols();
  st.rows = model.n_rows();
  st.nonzeros = static_cast<long>(model.lp.num_nonzeros());
  for (char c : model.lp.is_integer) st.integer_cols += c ? 1 : 0;
  for (int f = 0; f < kNumFamilies; ++f) {
    const long n = model.var_map.family_count(static_cast<Family>(f));
    if (n > 0) st.cols_by_family.emplace_back(kFamilies[f].name, n);
  }
  std::array<FamilyStats, kNumRowFamilies> rows{};
  for (int r = 0; r < model.n_rows(); ++r) {
    auto& fs = rows[static_cast<int>(model.row_tags[r].family)];
    ++fs.rows;
    fs.nonzeros += static_cast<long>(model.lp.row_start[r + 1] - model.lp.row_start[r]);
  }
  for (int f = 0; f < kNumRowFamilies; ++f)
    if (rows[f].rows > 0) {
      rows[f].family = kRowFamilies[f].name;
      st.rows_by_family.push_back(rows[f]);
    }
  return st;
}

ObjectiveBreakdown evaluate_solution(const MilpModel& model, const std::vector<double>& point) {
  if (static_cast<int>(point.size()) != model.n_cols())
    throw std::invalid_argument("point has " + std::to_string(point.size()) +
                                " entries, model has " + std::to_string(model.n_cols()) +
                                " columns");
  const ModelInputs& in = *model.inputs;
  const Instance& inst = in.instance;
  const ScenarioSet& scen = in.scenarios;
  const StrategyConfig& cfg = in.strategies;
  const NetworkSets& sets = inst.sets;
  const int I = sets.suppliers(), J = sets.manufacturers(), K = sets.warehouses();
  const int M = sets.retailers, T = sets.periods, L = sets.modes, S = sets.scenarios;
  const bool info = cfg.info_sharing;
  const VariableMap& vm = model.var_map;

  auto val = [&](Family f, int a, int b = 0, int c = 0, int d = 0, int e = 0) {
    const int col = vm.col(f, a, b, c, d, e);
    return col < 0 ? 0.0 : point[col];
  };
  auto transport_em = [&](double e) {
    return info ? std::max(0.0, e - inst.emission_saving) : e;
  };
  auto delay_charge = [&](double delay, double saved, int s) {
    const double w = in.options.delay_mode == DelayMode::Expected ? scen.probability[s] : 1.0;
    return w * inst.delay_cost * std::max(0.0, delay - (info ? saved : 0.0));
  };

  ObjectiveBreakdown out;
  out.c2.assign(S, 0.0);
  out.c3.assign(S, 0.0);
  out.c4.assign(S, 0.0);
  out.emission.assign(S, 0.0);

  for (int t = 0; t < T; ++t)
    for (int l = 0; l < L; ++l) {
      for (int i = 0; i < I; ++i)
        for (int j = 0; j < J; ++j) {
          const double b = val(Family::XX, i, j, t, l);
          if (b != 0.0)
            for (int s = 0; s < S; ++s)
              out.c1 += b * delay_charge(inst.transport_delay1(i, j, l, s), inst.saved_time1(i, j, l), s);
          for (int s = 0; s < S; ++s) {
            const double x = val(Family::X, i, j, t, l, s);
            out.c2[s] += x * inst.transport_cost1(i, j, l, s);
            out.emission[s] += x * transport_em(inst.emission_transport1(i, j, l));
          }
        }
      for (int j = 0; j < J; ++j)
        for (int k = 0; k < K; ++k) {
          const double b = val(Family::YY, j, k, t, l);
          if (b != 0.0)
            for (int s = 0; s < S; ++s)
              out.c1 += b * delay_charge(inst.transport_delay2(j, k, l, s), inst.saved_time2(j, k, l), s);
          for (int s = 0; s < S; ++s) {
            const double y = val(Family::Y, j, k, t, l, s);
            out.c2[s] += y * inst.transport_cost2(j, k, l, s);
            out.emission[s] +=
                y * (inst.emission_prod[j] + transport_em(inst.emission_transport2(j, k, l)));
          }
        }
      for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) {
          const double b = val(Family::ZZ, k, m, t, l);
          if (b != 0.0)
            for (int s = 0; s < S; ++s)
              out.c1 += b * delay_charge(inst.transport_delay3(k, m, l, s), inst.saved_time3(k, m, l), s);
          for (int s = 0; s < S; ++s) {
            const double z = val(Family::Z, k, m, t, l, s);
            out.c2[s] += z * inst.transport_cost3(k, m, l, s);
            out.emission[s] += z * transport_em(inst.emission_transport3(k, m, l));
          }
        }
    }

  for (int j = 0; j < J; ++j)
    for (int t = 0; t < T; ++t)
      for (int s = 0; s < S; ++s) {
        out.c3[s] += (val(Family::MI, j, t, s) + val(Family::MSS, j, t, s)) * inst.inv_cost(j, s) +
                     val(Family::SP, j, t, s) * inst.stockpile_premium;
        out.c4[s] += val(Family::MS, j, t, s) * inst.short_cost(j, s);
      }

  for (int j = sets.mfg_main; j < J; ++j)
    out.setup_cost += val(Family::U, j) * inst.setup_temp_mfg[j - sets.mfg_main];
  for (int k = sets.wh_main; k < K; ++k)
    out.setup_cost += val(Family::V, k) * inst.setup_temp_wh[k - sets.wh_main];
  if (info) out.setup_cost += inst.info_setup + inst.info_training;

  out.z1 = out.c1 + out.setup_cost;
  for (int s = 0; s < S; ++s) {
    out.z1 += scen.probability[s] * (out.c2[s] + out.c3[s] + out.c4[s]);
    out.z2 += scen.probability[s] * out.emission[s];
  }
  out.z_total = model.w_cost * out.z1 + model.w_emission * out.z2;
  return out;
}

std::string FeasibilityViolation::describe() const {
  static const char* kinds[] = {"row", "bound", "integrality"};
  std::string out = std::string(kinds[kind]) + " " + tag + "(";
  for (std::size_t p = 0; p < index.size(); ++p) {
    if (p) out += ",";
    out += index[p].first;
    out += "=" + std::to_string(index[p].second);
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, ") by %.6g", amount);
  return out + buf;
}

std::vector<FeasibilityViolation> check_feasibility(const MilpModel& model,
                                                    const std::vector<double>& point, double tol,
                                                    double tol_int) {
  if (static_cast<int>(point.size()) != model.n_cols())
    throw std::invalid_argument("point dimension mismatch");
  auto labelled = [](const char* labels, const Index& idx) {
    std::vector<std::pair<char, int>> out;
    for (int p = 0; labels[p]; ++p) out.emplace_back(labels[p], idx[p] + 1);
    return out;
  };
  std::vector<FeasibilityViolation> out;
  for (const LpViolation& v : check_point(model.lp, point, tol, tol_int)) {
    if (v.kind == LpViolation::Row) {
      const RowTag& tag = model.row_tags[v.index];
      // Literal cap rows are indexed by period only.
      const bool literal_cap = tag.family == RowFamily::EmissionCap &&
                               model.inputs->options.cap_mode == CapMode::Literal;
      out.push_back({FeasibilityViolation::Row, row_family_name(tag.family),
                     labelled(literal_cap ? "t" : row_family_labels(tag.family), tag.index),
                     v.amount});
    } else {
      const VarKey& key = model.var_map.key(v.index);
      out.push_back({v.kind == LpViolation::Bound ? FeasibilityViolation::Bound
                                                  : FeasibilityViolation::Integrality,
                     family_name(key.family), labelled(family_labels(key.family), key.index),
                     v.amount});
    }
  }
  return out;
}

namespace {

void recompute_open_binaries(const MilpModel& model, std::vector<double>& x) {
  const VariableMap& vm = model.var_map;
  for (int c = 0; c < vm.size(); ++c) {
    const VarKey& key = vm.key(c);
    if (key.family == Family::U || key.family == Family::V) x[c] = 0.0;
  }
  for (int c = 0; c < vm.size(); ++c) {
    const VarKey& key = vm.key(c);
    if (x[c] <= 0.5) continue;
    if (key.family == Family::YY) {
      if (int u = vm.col(Family::U, key.index[0]); u >= 0) x[u] = 1.0;
      if (int v = vm.col(Family::V, key.index[1]); v >= 0) x[v] = 1.0;
    } else if (key.family == Family::ZZ) {
      if (int v = vm.col(Family::V, key.index[0]); v >= 0) x[v] = 1.0;
    }
  }
}

}  // namespace

std::vector<double> transfer_point(const MilpModel& from, const std::vector<double>& point,
                                   const MilpModel& to) {
  std::vector<double> x(to.n_cols(), 0.0);
  for (int c = 0; c < to.n_cols(); ++c) {
    const int src = from.var_map.col(to.var_map.key(c));
    if (src >= 0) x[c] = point[src];
  }
  recompute_open_binaries(to, x);
  return x;
}

std::optional<std::vector<double>> link_rounding_heuristic(const MilpModel& model,
                                                           const std::vector<double>& lp_point,
                                                           const SolverOptions& opts) {
  const ModelInputs& in = *model.inputs;
  const NetworkSets& sets = in.instance.sets;
  const VariableMap& vm = model.var_map;
  const int T = sets.periods, L = sets.modes, S = sets.scenarios;
  const Family flow_of[3] = {Family::X, Family::Y, Family::Z};
  const Family bin_of[3] = {Family::XX, Family::YY, Family::ZZ};

  std::vector<double> x(model.n_cols(), 0.0);

  // Largest LP flow decides the mode of every link that carries anything.
  auto flow_on = [&](int e, int o, int d, int t, int l) {
    double f = 0.0;
    for (int s = 0; s < S; ++s) {
      const int c = vm.col(flow_of[e], o, d, t, l, s);
      if (c >= 0) f += lp_point[c];
    }
    return f;
  };
  const int dims[3][2] = {{sets.suppliers(), sets.manufacturers()},
                          {sets.manufacturers(), sets.warehouses()},
                          {sets.warehouses(), sets.retailers}};
  for (int e = 0; e < 3; ++e)
    for (int o = 0; o < dims[e][0]; ++o)
      for (int d = 0; d < dims[e][1]; ++d)
        for (int t = 0; t < T; ++t) {
          if (vm.col(bin_of[e], o, d, t, 0) < 0) continue;
          int best = -1;
          double best_val = opts.tol_feas;
          for (int l = 0; l < L; ++l) {
            const double v = flow_on(e, o, d, t, l);
            if (v > best_val) {
              best_val = v;
              best = l;
            }
          }
          if (best >= 0) x[vm.col(bin_of[e], o, d, t, best)] = 1.0;
        }

  auto top_up_suppliers = [&](std::vector<double>& pt) {
    if (!in.strategies.multiple_sourcing) return;
    for (int j = 0; j < sets.manufacturers(); ++j)
      for (int t = 0; t < T; ++t) {
        if (vm.col(Family::XX, 0, j, t, 0) < 0) continue;
        std::vector<std::pair<double, int>> candidates;
        int chosen = 0;
        for (int i = 0; i < sets.suppliers(); ++i) {
          if (vm.col(Family::XX, i, j, t, 0) < 0) continue;
          double lp_sum = 0.0;
          bool on = false;
          for (int l = 0; l < L; ++l) {
            const int c = vm.col(Family::XX, i, j, t, l);
            lp_sum += lp_point[c];
            on = on || pt[c] > 0.5;
          }
          if (on) ++chosen;
          else candidates.emplace_back(-lp_sum, i);
        }
        std::sort(candidates.begin(), candidates.end());
        for (std::size_t p = 0; chosen < in.instance.min_suppliers && p < candidates.size(); ++p) {
          const int i = candidates[p].second;
          int best_l = 0;
          for (int l = 1; l < L; ++l)
            if (lp_point[vm.col(Family::XX, i, j, t, l)] > lp_point[vm.col(Family::XX, i, j, t, best_l)])
              best_l = l;
          pt[vm.col(Family::XX, i, j, t, best_l)] = 1.0;
          ++chosen;
        }
      }
  };
  top_up_suppliers(x);
  recompute_open_binaries(model, x);

  LinearProgram fixed = model.lp;
  for (int c = 0; c < model.n_cols(); ++c) {
    const Family f = vm.key(c).family;
    if (f == Family::XX || f == Family::YY || f == Family::ZZ || f == Family::U || f == Family::V) {
      fixed.col_lower[c] = fixed.col_upper[c] = x[c];
    }
  }
  const LpResult sub = solve_lp(fixed, opts);
  if (sub.status != LpStatus::Optimal) return std::nullopt;
  std::vector<double> point = sub.primal;

  // Close links that ended up carrying nothing in every scenario.
  for (int c = 0; c < model.n_cols(); ++c) {
    const VarKey& key = vm.key(c);
    int e = -1;
    if (key.family == Family::XX) e = 0;
    else if (key.family == Family::YY) e = 1;
    else if (key.family == Family::ZZ) e = 2;
    if (e < 0 || point[c] < 0.5) continue;
    double f = 0.0;
    for (int s = 0; s < S; ++s)
      f += point[vm.col(flow_of[e], key.index[0], key.index[1], key.index[2], key.index[3], s)];
    if (f <= opts.tol_feas) point[c] = 0.0;
  }
  if (in.strategies.multiple_sourcing) {
    // Restore suppliers required by the minimum-sourcing rows.
    for (int j = 0; j < sets.manufacturers(); ++j)
      for (int t = 0; t < T; ++t) {
        if (vm.col(Family::XX, 0, j, t, 0) < 0) continue;
        int count = 0;
        for (int i = 0; i < sets.suppliers(); ++i)
          for (int l = 0; l < L; ++l) {
            const int c = vm.col(Family::XX, i, j, t, l);
            if (c >= 0 && point[c] > 0.5) ++count;
          }
        for (int i = 0; i < sets.suppliers() && count < in.instance.min_suppliers; ++i)
          for (int l = 0; l < L && count < in.instance.min_suppliers; ++l) {
            const int c = vm.col(Family::XX, i, j, t, l);
            if (c >= 0 && x[c] > 0.5 && point[c] < 0.5) {
              point[c] = 1.0;
              ++count;
            }
          }
      }
  }
  recompute_open_binaries(model, point);
  return point;
}

LpResult solve_model_lp(const MilpModel& model, const SolverOptions& opts) {
  return solve_lp(model.lp, opts);
}

MipResult solve_model(const MilpModel& model, const SolverOptions& opts,
                      std::optional<std::vector<double>> start) {
  MipHooks hooks;
  hooks.start = std::move(start);
  hooks.root_heuristic = [&model, opts](const std::vector<double>& lp_point) {
    return link_rounding_heuristic(model, lp_point, opts);
  };
  return solve_mip(model.lp, opts, hooks);
}

}  // namespace rgsc
