#include "rgsc/report.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "rgsc/mps.hpp"
#include "rgsc/version.hpp"

namespace rgsc {

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

Json Provenance::to_json() const {
  Json j;
  j["tool"] = kToolName;
  j["version"] = kVersion;
  j["instance_hash"] = instance_hash;
  Json opts = Json::object();
  for (const auto& [k, v] : options) opts[k] = v;
  j["options"] = opts;
  return j;
}

std::string Provenance::comment_block(const std::string& prefix) const {
  std::string out = prefix + "tool: " + kToolName + " " + kVersion + "\n";
  out += prefix + "instance_hash: " + instance_hash + "\n";
  for (const auto& [k, v] : options) out += prefix + k + ": " + v + "\n";
  return out;
}

Provenance make_provenance(const InstanceFile& file, const ModelOptions& model,
                           const SolverOptions& solver) {
  return {instance_hash(file), describe_options(file.strategies, model, solver)};
}

std::string model_mps(const MilpModel& model, const Provenance& prov) {
  return prov.comment_block("* ") + to_mps(model.lp);
}

std::vector<std::pair<std::string, std::string>> describe_options(const StrategyConfig& cfg,
                                                                  const ModelOptions& model,
                                                                  const SolverOptions& solver) {
  auto flag = [](bool b) { return std::string(b ? "on" : "off"); };
  return {
      {"backup_suppliers", flag(cfg.backup_suppliers)},
      {"multiple_sourcing", flag(cfg.multiple_sourcing)},
      {"safety_stock", flag(cfg.safety_stock)},
      {"stockpiling", flag(cfg.stockpiling)},
      {"temporary_facilities", flag(cfg.temporary_facilities)},
      {"info_sharing", flag(cfg.info_sharing)},
      {"weights", format_number(model.w_cost) + "," + format_number(model.w_emission)},
      {"cap_mode", to_string(model.cap_mode)},
      {"delay_mode", to_string(model.delay_mode)},
      {"integrality", to_string(model.integrality)},
      {"flow_upper", format_number(model.flow_upper)},
      {"seed", std::to_string(solver.seed)},
      {"tol_feas", format_number(solver.tol_feas)},
      {"tol_int", format_number(solver.tol_int)},
      {"tol_opt", format_number(solver.tol_opt)},
      {"mip_gap", format_number(solver.mip_gap)},
      {"node_limit", std::to_string(solver.node_limit)},
      {"time_limit", format_number(solver.time_limit)},
      {"branching", to_string(solver.branching)},
  };
}

namespace {

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

Json solution_json(const MilpModel& model, const MipResult& result, const Provenance& prov) {
  Json out;
  out["provenance"] = prov.to_json();
  out["status"] = to_string(result.status);
  Json solver;
  solver["objective"] = number_or_null(result.objective);
  solver["bound"] = number_or_null(result.bound);
  solver["gap"] = number_or_null(result.gap);
  solver["nodes"] = result.nodes;
  solver["root_lp"] = number_or_null(result.root_lp);
  out["solver"] = solver;
  if (!result.incumbent) return out;

  const std::vector<double>& x = *result.incumbent;
  const ObjectiveBreakdown br = evaluate_solution(model, x);
  const ScenarioSet& scen = model.inputs->scenarios;
  Json obj;
  obj["Z1"] = br.z1;
  obj["Z2"] = br.z2;
  obj["Z_Total"] = br.z_total;
  obj["C1"] = br.c1;
  obj["setup"] = br.setup_cost;
  Json per = Json::array();
  for (std::size_t s = 0; s < br.c2.size(); ++s)
    per.push_back({{"s", s + 1},
                   {"probability", scen.probability[s]},
                   {"C2", br.c2[s]},
                   {"C3", br.c3[s]},
                   {"C4", br.c4[s]},
                   {"E", br.emission[s]}});
  obj["scenarios"] = per;
  out["objective"] = obj;

  const int S = model.inputs->instance.sets.scenarios;
  Json first;
  for (Family f : {Family::XX, Family::YY, Family::ZZ, Family::U, Family::V}) first[family_name(f)] = Json::array();
  std::vector<Json> second(S);
  for (int s = 0; s < S; ++s) {
    second[s]["s"] = s + 1;
    for (Family f : {Family::X, Family::Y, Family::Z, Family::MI, Family::MS, Family::MSS, Family::SP})
      second[s][family_name(f)] = Json::array();
  }
  for (int c = 0; c < model.n_cols(); ++c) {
    if (std::abs(x[c]) <= 1e-9) continue;
    const VarKey& key = model.var_map.key(c);
    const char* labels = family_labels(key.family);
    Json e;
    int s = -1;
    for (int p = 0; labels[p]; ++p) {
      if (labels[p] == 's') {
        s = key.index[p];
        continue;
      }
      e[std::string(1, labels[p])] = key.index[p] + 1;
    }
    if (s < 0) {
      first[family_name(key.family)].push_back(e);
    } else {
      e["value"] = x[c];
      second[s][family_name(key.family)].push_back(e);
    }
  }
  out["first_stage"] = first;
  out["second_stage"] = second;
  return out;
}

}  // namespace rgsc
