#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rgsc/tensor.hpp"

namespace rgsc {

/// Cardinalities of the four echelons plus periods, modes and scenarios.
/// Backup suppliers and temporary facilities follow the main entities in
/// each index space (main 0..I-1, backup I..I'-1).
struct NetworkSets {
  int suppliers_main = 1;
  int suppliers_backup = 0;
  int mfg_main = 1;
  int mfg_temp = 0;
  int wh_main = 1;
  int wh_temp = 0;
  int retailers = 1;
  int periods = 1;
  int modes = 1;
  int scenarios = 1;

  int suppliers() const { return suppliers_main + suppliers_backup; }
  int manufacturers() const { return mfg_main + mfg_temp; }
  int warehouses() const { return wh_main + wh_temp; }

  bool operator==(const NetworkSets&) const = default;
};

/// Deterministic parameters. Shapes (using I', J', K' for the full index
/// spaces including backup/temporary entities):
///   transport_cost1/transport_delay1   [I'][J'][L][S]
///   transport_cost2/transport_delay2   [J'][K'][L][S]
///   transport_cost3/transport_delay3   [K'][M][L][S]
///   saved_time1, emission_transport1   [I'][J'][L]
///   saved_time2, emission_transport2   [J'][K'][L]
///   saved_time3, emission_transport3   [K'][M][L]
///   inv_cost, short_cost               [J'][S]
struct Instance {
  NetworkSets sets;

  Tensor transport_cost1, transport_cost2, transport_cost3;
  Tensor transport_delay1, transport_delay2, transport_delay3;
  Tensor saved_time1, saved_time2, saved_time3;
  double delay_cost = 0.0;

  std::vector<double> setup_temp_mfg;  // one entry per temporary manufacturer
  std::vector<double> setup_temp_wh;   // one entry per temporary warehouse
  double info_setup = 0.0;
  double info_training = 0.0;

  Tensor inv_cost, short_cost;
  std::vector<double> mfg_capacity;  // [J']
  std::vector<double> wh_capacity;   // [K']
  double stockpile_premium = 0.0;
  int min_suppliers = 1;

  std::vector<double> emission_prod;  // [J']
  Tensor emission_transport1, emission_transport2, emission_transport3;
  double emission_saving = 0.0;
  std::vector<double> cap;  // [T]
  double big_m = 0.0;

  bool operator==(const Instance&) const = default;
};

/// Scenario data: probability [S], demand [M][T][S], capacity-loss
/// fractions [J'][S] and [K'][S].
struct ScenarioSet {
  std::vector<double> probability;
  Tensor demand;
  Tensor mfg_capacity_loss;
  Tensor wh_capacity_loss;

  bool operator==(const ScenarioSet&) const = default;
};

struct StrategyConfig {
  bool backup_suppliers = false;
  bool multiple_sourcing = false;
  bool safety_stock = false;
  bool stockpiling = false;
  bool temporary_facilities = false;
  bool info_sharing = false;

  bool operator==(const StrategyConfig&) const = default;
};

struct Violation {
  std::string code;
  std::string detail;
};
using ValidationReport = std::vector<Violation>;

/// Checks every data invariant and all array shapes. Violations are data.
ValidationReport validate_instance(const Instance& inst, const ScenarioSet& scen);

/// Checks strategy toggles against the instance (e.g. multiple sourcing
/// needs min_suppliers >= 2 and enough suppliers to satisfy it).
ValidationReport validate_strategies(const Instance& inst, const StrategyConfig& cfg);

bool has_violation(const ValidationReport& report, const std::string& code);

/// Allocates every array with the right shape, zero filled.
Instance make_empty_instance(const NetworkSets& sets);
ScenarioSet make_empty_scenarios(const NetworkSets& sets);

/// Largest cumulative (over periods and retailers) demand of any scenario;
/// no single flow of an optimal plan exceeds it.
double min_valid_big_m(const ScenarioSet& scen);

/// 4 scenarios, 5+3 suppliers, 3+3 manufacturers, 5+3 warehouses,
/// 7 retailers, 6 periods, 2 modes.
NetworkSets paper_like_sets();

/// Known disruption profiles: "paper-like", "severe", "none".
std::vector<std::string> disruption_profiles();

struct GeneratedInstance {
  Instance instance;
  ScenarioSet scenarios;
};

/// Seeded synthetic instance. Scenario 0 is the undisrupted baseline; later
/// scenarios apply non-decreasing disruption levels. Throws
/// std::invalid_argument for unknown profiles or invalid sets.
GeneratedInstance generate_instance(std::uint64_t seed, const NetworkSets& sets,
                                    const std::string& profile);

struct InstanceFile {
  Instance instance;
  ScenarioSet scenarios;
  StrategyConfig strategies;

  bool operator==(const InstanceFile&) const = default;
};

/// JSON instance files (see docs/instance_format.md). Reading throws
/// SchemaError naming the offending field.
InstanceFile parse_instance(const std::string& text);
std::string serialize_instance(const InstanceFile& file);
InstanceFile read_instance(const std::filesystem::path& path);
void write_instance(const std::filesystem::path& path, const InstanceFile& file);

/// FNV-1a hash of the canonical serialization, hex encoded.
std::string instance_hash(const InstanceFile& file);

}  // namespace rgsc
