#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "rgsc/errors.hpp"
#include "rgsc/instance.hpp"

namespace rgsc {

namespace {

using nlohmann::json;
using Shape = std::vector<std::size_t>;

json tensor_to_json(const Tensor& t, std::size_t axis, std::size_t& pos) {
  json arr = json::array();
  const std::size_t n = t.dim(axis);
  for (std::size_t i = 0; i < n; ++i) {
    if (axis + 1 == t.rank())
      arr.push_back(t.data()[pos++]);
    else
      arr.push_back(tensor_to_json(t, axis + 1, pos));
  }
  return arr;
}

json tensor_to_json(const Tensor& t) {
  std::size_t pos = 0;
  return t.rank() == 0 ? json::array() : tensor_to_json(t, 0, pos);
}

/// Reads one JSON object, tracking which keys were consumed so leftovers can
/// be reported as unknown.
class Section {
 public:
  Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw SchemaError(path_, "expected an object");
  }

  const json& at(const std::string& key) {
    seen_.insert(key);
    auto it = j_.find(key);
    if (it == j_.end()) throw SchemaError(field(key), "missing required field");
    return *it;
  }

  bool has(const std::string& key) const { return j_.contains(key); }
  void skip(const std::string& key) { seen_.insert(key); }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  double number(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number()) throw SchemaError(field(key), "expected a number");
    return v.get<double>();
  }

  int integer(const std::string& key) {
    const json& v = at(key);
    if (!v.is_number_integer()) throw SchemaError(field(key), "expected an integer");
    return v.get<int>();
  }

  bool flag(const std::string& key) {
    const json& v = at(key);
    if (!v.is_boolean()) throw SchemaError(field(key), "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> vector(const std::string& key, std::size_t expected) {
    Tensor t = tensor(key, {expected});
    return t.data();
  }

  Tensor tensor(const std::string& key, const Shape& shape) {
    Tensor t(shape);
    std::size_t pos = 0;
    read_level(at(key), field(key), shape, 0, t, pos);
    return t;
  }

  void finish() const {
    std::vector<std::string> unknown;
    for (auto it = j_.begin(); it != j_.end(); ++it)
      if (!seen_.count(it.key())) unknown.push_back(it.key());
    if (!unknown.empty()) {
      std::string keys;
      for (const auto& k : unknown) keys += (keys.empty() ? "" : ", ") + k;
      throw SchemaError(path_, "unknown field(s): " + keys);
    }
  }

 private:
  static void read_level(const json& v, const std::string& where, const Shape& shape,
                         std::size_t axis, Tensor& out, std::size_t& pos) {
    if (!v.is_array()) throw SchemaError(where, "expected an array");
    if (v.size() != shape[axis])
      throw SchemaError(where, "expected " + std::to_string(shape[axis]) + " entries, got " +
                                   std::to_string(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
      const std::string here = where + "[" + std::to_string(i) + "]";
      if (axis + 1 == shape.size()) {
        if (!v[i].is_number()) throw SchemaError(here, "expected a number");
        out.data()[pos++] = v[i].get<double>();
      } else {
        read_level(v[i], here, shape, axis + 1, out, pos);
      }
    }
  }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

std::size_t sz(int n) { return static_cast<std::size_t>(n); }

json sets_json(const NetworkSets& s) {
  return json{{"suppliers_main", s.suppliers_main}, {"suppliers_backup", s.suppliers_backup},
              {"mfg_main", s.mfg_main},             {"mfg_temp", s.mfg_temp},
              {"wh_main", s.wh_main},               {"wh_temp", s.wh_temp},
              {"retailers", s.retailers},           {"periods", s.periods},
              {"modes", s.modes},                   {"scenarios", s.scenarios}};
}

json canonical_json(const InstanceFile& f) {
  const Instance& p = f.instance;
  json params = {
      {"transport_cost1", tensor_to_json(p.transport_cost1)},
      {"transport_cost2", tensor_to_json(p.transport_cost2)},
      {"transport_cost3", tensor_to_json(p.transport_cost3)},
      {"transport_delay1", tensor_to_json(p.transport_delay1)},
      {"transport_delay2", tensor_to_json(p.transport_delay2)},
      {"transport_delay3", tensor_to_json(p.transport_delay3)},
      {"saved_time1", tensor_to_json(p.saved_time1)},
      {"saved_time2", tensor_to_json(p.saved_time2)},
      {"saved_time3", tensor_to_json(p.saved_time3)},
      {"delay_cost", p.delay_cost},
      {"setup_temp_mfg", p.setup_temp_mfg},
      {"setup_temp_wh", p.setup_temp_wh},
      {"info_setup", p.info_setup},
      {"info_training", p.info_training},
      {"inv_cost", tensor_to_json(p.inv_cost)},
      {"short_cost", tensor_to_json(p.short_cost)},
      {"mfg_capacity", p.mfg_capacity},
      {"wh_capacity", p.wh_capacity},
      {"stockpile_premium", p.stockpile_premium},
      {"min_suppliers", p.min_suppliers},
      {"emission_prod", p.emission_prod},
      {"emission_transport1", tensor_to_json(p.emission_transport1)},
      {"emission_transport2", tensor_to_json(p.emission_transport2)},
      {"emission_transport3", tensor_to_json(p.emission_transport3)},
      {"emission_saving", p.emission_saving},
      {"cap", p.cap},
      {"big_m", p.big_m},
  };
  const ScenarioSet& s = f.scenarios;
  json scenarios = {
      {"probability", s.probability},
      {"demand", tensor_to_json(s.demand)},
      {"mfg_capacity_loss", tensor_to_json(s.mfg_capacity_loss)},
      {"wh_capacity_loss", tensor_to_json(s.wh_capacity_loss)},
  };
  const StrategyConfig& c = f.strategies;
  json strategies = {
      {"backup_suppliers", c.backup_suppliers}, {"multiple_sourcing", c.multiple_sourcing},
      {"safety_stock", c.safety_stock},         {"stockpiling", c.stockpiling},
      {"temporary_facilities", c.temporary_facilities}, {"info_sharing", c.info_sharing},
  };
  return json{{"sets", sets_json(p.sets)},
              {"parameters", params},
              {"scenarios", scenarios},
              {"strategies", strategies}};
}

}  // namespace

InstanceFile parse_instance(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    // e.byte is 1-based; translate to line/column for the message.
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw SchemaError("", "parse error at line " + std::to_string(line) + ", column " +
                              std::to_string(col) + ": " + e.what());
  }

  Section top(root, "");
  top.skip("provenance");
  InstanceFile out;

  {
    Section sec(top.at("sets"), "sets");
    NetworkSets& s = out.instance.sets;
    s.suppliers_main = sec.integer("suppliers_main");
    s.suppliers_backup = sec.integer("suppliers_backup");
    s.mfg_main = sec.integer("mfg_main");
    s.mfg_temp = sec.integer("mfg_temp");
    s.wh_main = sec.integer("wh_main");
    s.wh_temp = sec.integer("wh_temp");
    s.retailers = sec.integer("retailers");
    s.periods = sec.integer("periods");
    s.modes = sec.integer("modes");
    s.scenarios = sec.integer("scenarios");
    sec.finish();
    Instance probe;
    probe.sets = s;
    const auto report = validate_instance(probe, ScenarioSet{});
    if (has_violation(report, "count")) throw SchemaError("sets", report.front().detail);
  }

  const NetworkSets& s = out.instance.sets;
  const auto I = sz(s.suppliers()), J = sz(s.manufacturers()), K = sz(s.warehouses());
  const auto M = sz(s.retailers), T = sz(s.periods), L = sz(s.modes), S = sz(s.scenarios);

  {
    Section sec(top.at("parameters"), "parameters");
    Instance& p = out.instance;
    p.transport_cost1 = sec.tensor("transport_cost1", {I, J, L, S});
    p.transport_cost2 = sec.tensor("transport_cost2", {J, K, L, S});
    p.transport_cost3 = sec.tensor("transport_cost3", {K, M, L, S});
    p.transport_delay1 = sec.tensor("transport_delay1", {I, J, L, S});
    p.transport_delay2 = sec.tensor("transport_delay2", {J, K, L, S});
    p.transport_delay3 = sec.tensor("transport_delay3", {K, M, L, S});
    p.saved_time1 = sec.tensor("saved_time1", {I, J, L});
    p.saved_time2 = sec.tensor("saved_time2", {J, K, L});
    p.saved_time3 = sec.tensor("saved_time3", {K, M, L});
    p.delay_cost = sec.number("delay_cost");
    p.setup_temp_mfg = sec.vector("setup_temp_mfg", sz(s.mfg_temp));
    p.setup_temp_wh = sec.vector("setup_temp_wh", sz(s.wh_temp));
    p.info_setup = sec.number("info_setup");
    p.info_training = sec.number("info_training");
    p.inv_cost = sec.tensor("inv_cost", {J, S});
    p.short_cost = sec.tensor("short_cost", {J, S});
    p.mfg_capacity = sec.vector("mfg_capacity", J);
    p.wh_capacity = sec.vector("wh_capacity", K);
    p.stockpile_premium = sec.number("stockpile_premium");
    p.min_suppliers = sec.integer("min_suppliers");
    p.emission_prod = sec.vector("emission_prod", J);
    p.emission_transport1 = sec.tensor("emission_transport1", {I, J, L});
    p.emission_transport2 = sec.tensor("emission_transport2", {J, K, L});
    p.emission_transport3 = sec.tensor("emission_transport3", {K, M, L});
    p.emission_saving = sec.number("emission_saving");
    p.cap = sec.vector("cap", T);
    p.big_m = sec.number("big_m");
    sec.finish();
  }
  {
    Section sec(top.at("scenarios"), "scenarios");
    ScenarioSet& sc = out.scenarios;
    sc.probability = sec.vector("probability", S);
    sc.demand = sec.tensor("demand", {M, T, S});
    sc.mfg_capacity_loss = sec.tensor("mfg_capacity_loss", {J, S});
    sc.wh_capacity_loss = sec.tensor("wh_capacity_loss", {K, S});
    sec.finish();
  }
  {
    Section sec(top.at("strategies"), "strategies");
    StrategyConfig& c = out.strategies;
    c.backup_suppliers = sec.flag("backup_suppliers");
    c.multiple_sourcing = sec.flag("multiple_sourcing");
    c.safety_stock = sec.flag("safety_stock");
    c.stockpiling = sec.flag("stockpiling");
    c.temporary_facilities = sec.flag("temporary_facilities");
    c.info_sharing = sec.flag("info_sharing");
    sec.finish();
  }
  top.finish();
  return out;
}

std::string serialize_instance(const InstanceFile& file) {
  return canonical_json(file).dump(1) + "\n";
}

InstanceFile read_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError("", "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

void write_instance(const std::filesystem::path& path, const InstanceFile& file) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << serialize_instance(file);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string instance_hash(const InstanceFile& file) {
  const std::string text = canonical_json(file).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rgsc
