// rgsc command-line tool.
//
// Exit codes: 0 success, 1 infeasible model, 2 usage or configuration
// error, 3 internal error.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rgsc/analysis.hpp"
#include "rgsc/errors.hpp"
#include "rgsc/formulation.hpp"
#include "rgsc/mps.hpp"
#include "rgsc/oracle.hpp"
#include "rgsc/report.hpp"
#include "rgsc/version.hpp"

namespace {

using namespace rgsc;

constexpr int kOk = 0, kInfeasible = 1, kUsage = 2, kInternal = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Common {
  std::string instance;
  std::string out;
  std::uint64_t seed = 0;
  std::string weights = "1,1";
  std::string cap_mode = "perscenario";
  std::string delay_mode = "expected";
  std::string integrality = "relaxed";
  int jobs = 1;
  std::vector<std::string> enable, disable;
  double mip_gap = 0.0;
  double time_limit = 1e30;
  long node_limit = 1'000'000;
  std::string branching = "most-fractional";
  double flow_upper = kInf;
};

void add_model_flags(CLI::App* app, Common& c) {
  app->add_option("--instance", c.instance, "instance file (JSON)")->required();
  app->add_option("--weights", c.weights, "objective weights w1,w2 for cost and emission");
  app->add_option("--cap-mode", c.cap_mode, "emission cap rows: perscenario|literal");
  app->add_option("--delay-mode", c.delay_mode, "delay cost weighting: expected|literal");
  app->add_option("--integrality", c.integrality, "flow integrality: relaxed|full");
  app->add_option("--flow-upper", c.flow_upper, "upper bound on every recourse quantity");
  app->add_option("--enable", c.enable, "strategies to switch on (overrides the file)")
      ->delimiter(',');
  app->add_option("--disable", c.disable, "strategies to switch off (overrides the file)")
      ->delimiter(',');
}

void add_solver_flags(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "solver seed");
  app->add_option("--mip-gap", c.mip_gap, "relative gap at which branch-and-bound stops");
  app->add_option("--time-limit", c.time_limit, "seconds per solve");
  app->add_option("--node-limit", c.node_limit, "nodes per solve");
  app->add_option("--branching", c.branching, "most-fractional|pseudo-cost");
}

bool* strategy_flag(StrategyConfig& cfg, std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  if (name == "backup_suppliers") return &cfg.backup_suppliers;
  if (name == "multiple_sourcing") return &cfg.multiple_sourcing;
  if (name == "safety_stock") return &cfg.safety_stock;
  if (name == "stockpiling") return &cfg.stockpiling;
  if (name == "temporary_facilities") return &cfg.temporary_facilities;
  if (name == "info_sharing") return &cfg.info_sharing;
  throw UsageError("unknown strategy '" + name + "'");
}

StrategyConfig with_overrides(StrategyConfig cfg, const Common& c) {
  for (const auto& n : c.enable) *strategy_flag(cfg, n) = true;
  for (const auto& n : c.disable) *strategy_flag(cfg, n) = false;
  return cfg;
}

ModelOptions model_options(const Common& c) {
  ModelOptions o;
  const auto comma = c.weights.find(',');
  if (comma == std::string::npos) throw UsageError("--weights expects w1,w2");
  try {
    std::size_t p1 = 0, p2 = 0;
    const std::string a = c.weights.substr(0, comma), b = c.weights.substr(comma + 1);
    o.w_cost = std::stod(a, &p1);
    o.w_emission = std::stod(b, &p2);
    if (p1 != a.size() || p2 != b.size()) throw std::invalid_argument("");
  } catch (const std::logic_error&) {
    throw UsageError("--weights expects two numbers, got '" + c.weights + "'");
  }
  try {
    o.cap_mode = parse_cap_mode(c.cap_mode);
    o.delay_mode = parse_delay_mode(c.delay_mode);
    o.integrality = parse_integrality(c.integrality);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  o.flow_upper = c.flow_upper;
  return o;
}

SolverOptions solver_options(const Common& c) {
  SolverOptions o;
  o.seed = c.seed;
  o.mip_gap = c.mip_gap;
  o.time_limit = c.time_limit;
  o.node_limit = c.node_limit;
  try {
    o.branching = parse_branching(c.branching);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return o;
}

void print_config(const std::vector<std::pair<std::string, std::string>>& opts) {
  std::cout << "configuration:\n";
  for (const auto& [k, v] : opts) std::cout << "  " << k << " = " << v << "\n";
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << text;
  if (!f) throw std::runtime_error("failed writing " + path);
}

struct Loaded {
  InstanceFile file;
  ModelOptions model;
  SolverOptions solver;
  Provenance prov;
};

Loaded load(const Common& c) {
  Loaded l;
  l.file = read_instance(c.instance);
  l.file.strategies = with_overrides(l.file.strategies, c);
  l.model = model_options(c);
  l.solver = solver_options(c);
  l.prov = make_provenance(l.file, l.model, l.solver);
  return l;
}

int cmd_generate(std::uint64_t seed, const std::string& profile, const std::string& sets_text,
                 const Common& c) {
  NetworkSets sets = paper_like_sets();
  if (!sets_text.empty()) {
    std::vector<int> v;
    std::stringstream ss(sets_text);
    for (std::string p; std::getline(ss, p, ',');) {
      try {
        v.push_back(std::stoi(p));
      } catch (const std::logic_error&) {
        throw UsageError("--sets expects ten integers");
      }
    }
    if (v.size() != 10) throw UsageError("--sets expects I,Ib,J,Jt,K,Kt,M,T,L,S");
    sets = {v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7], v[8], v[9]};
  }
  std::cout << "configuration:\n  seed = " << seed << "\n  profile = " << profile << "\n";
  GeneratedInstance g;
  try {
    g = generate_instance(seed, sets, profile);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  InstanceFile file{g.instance, g.scenarios, with_overrides({}, c)};
  if (c.out.empty()) std::cout << serialize_instance(file);
  else write_instance(c.out, file);
  std::cout << "instance_hash = " << instance_hash(file) << "\n";
  return kOk;
}

int cmd_validate(const Common& c) {
  std::cout << "configuration:\n  instance = " << c.instance << "\n";
  InstanceFile file = read_instance(c.instance);
  file.strategies = with_overrides(file.strategies, c);
  auto report = validate_instance(file.instance, file.scenarios);
  const auto strat = validate_strategies(file.instance, file.strategies);
  report.insert(report.end(), strat.begin(), strat.end());
  if (report.empty()) {
    std::cout << "OK\n";
    return kOk;
  }
  for (const auto& v : report) std::cout << v.code << ": " << v.detail << "\n";
  return kUsage;
}

int cmd_inspect(const Common& c) {
  const Loaded l = load(c);
  print_config(l.prov.options);
  const MilpModel model = build_model(l.file.instance, l.file.scenarios, l.file.strategies, l.model);
  const ModelStats st = model_stats(model);
  std::printf("columns %ld (integer %ld), rows %ld, nonzeros %ld\n", st.cols, st.integer_cols,
              st.rows, st.nonzeros);
  std::printf("%-16s %10s\n", "column family", "count");
  for (const auto& [name, n] : st.cols_by_family) std::printf("%-16s %10ld\n", name.c_str(), n);
  std::printf("%-16s %10s %10s\n", "row family", "rows", "nonzeros");
  for (const auto& f : st.rows_by_family)
    std::printf("%-16s %10ld %10ld\n", f.family.c_str(), f.rows, f.nonzeros);
  return kOk;
}

int cmd_solve(const Common& c, bool lp_only) {
  Loaded l = load(c);
  l.prov.options.emplace_back("lp_only", lp_only ? "on" : "off");
  print_config(l.prov.options);
  const MilpModel model = build_model(l.file.instance, l.file.scenarios, l.file.strategies, l.model);

  if (lp_only) {
    const LpResult lp = solve_model_lp(model, l.solver);
    std::cout << "status: " << to_string(lp.status) << "\n";
    if (lp.status == LpStatus::Optimal)
      std::cout << "lp_objective: " << format_number(lp.objective) << "\n"
                << "dual_objective: " << format_number(lp.dual_objective) << "\n";
    if (!c.out.empty()) {
      Json j;
      j["provenance"] = l.prov.to_json();
      j["status"] = to_string(lp.status);
      if (lp.status == LpStatus::Optimal) {
        j["lp_objective"] = lp.objective;
        j["dual_objective"] = lp.dual_objective;
      }
      write_text(c.out, j.dump(2) + "\n");
    }
    if (lp.status == LpStatus::Infeasible) {
      std::cerr << "model is infeasible\n";
      return kInfeasible;
    }
    return lp.status == LpStatus::Optimal ? kOk : kInternal;
  }

  const MipResult res = solve_model(model, l.solver);
  std::cout << "status: " << to_string(res.status) << "\n";
  if (res.incumbent) {
    const ObjectiveBreakdown br = evaluate_solution(model, *res.incumbent);
    std::cout << "Z1: " << format_number(br.z1) << "\nZ2: " << format_number(br.z2)
              << "\nZ_Total: " << format_number(br.z_total) << "\nbound: " << format_number(res.bound)
              << "\ngap: " << format_number(res.gap) << "\nnodes: " << res.nodes << "\n";
  }
  if (!c.out.empty()) write_text(c.out, solution_json(model, res, l.prov).dump(2) + "\n");
  if (res.status == MipStatus::Infeasible) {
    std::cerr << "model is infeasible\n";
    return kInfeasible;
  }
  return kOk;
}

int cmd_oracle(const Common& c, int max_flow, long long guard) {
  Loaded l = load(c);
  l.prov.options.emplace_back("max_flow", std::to_string(max_flow));
  print_config(l.prov.options);
  if (l.model.cap_mode != CapMode::PerScenario)
    throw UsageError("the oracle supports --cap-mode perscenario only");
  oracle::Weights w{l.model.w_cost, l.model.w_emission, l.model.delay_mode == DelayMode::Literal};
  if (auto v = validate_instance(l.file.instance, l.file.scenarios); !v.empty())
    throw ConfigError(v.front().code + ": " + v.front().detail);
  if (auto v = validate_strategies(l.file.instance, l.file.strategies); !v.empty())
    throw ConfigError(v.front().detail);
  oracle::Result r;
  try {
    r = oracle::enumerate_optimal(l.file.instance, l.file.scenarios, l.file.strategies, w, max_flow, guard);
  } catch (const oracle::GuardExceeded& e) {
    throw UsageError(e.what());
  }
  std::cout << "assignments examined: " << r.assignments << "\n";
  if (!r.feasible) {
    std::cout << "status: infeasible\n";
    std::cerr << "no plan within the bounds is feasible\n";
    return kInfeasible;
  }
  std::cout << "status: optimal\nobjective: " << format_number(r.objective) << "\n";
  const auto print = [](const char* name, const Tensor& t) {
    const auto& sh = t.shape();
    for (std::size_t p = 0; p < t.size(); ++p) {
      if (t.data()[p] == 0.0) continue;
      std::size_t rest = p;
      std::vector<std::size_t> idx(sh.size());
      for (std::size_t a = sh.size(); a-- > 0;) {
        idx[a] = rest % sh[a];
        rest /= sh[a];
      }
      std::cout << "  " << name << "(";
      for (std::size_t a = 0; a < idx.size(); ++a) std::cout << (a ? "," : "") << idx[a] + 1;
      std::cout << ") = " << format_number(t.data()[p]) << "\n";
    }
  };
  const oracle::Assignment& a = r.assignment;
  print("XX", a.xx); print("YY", a.yy); print("ZZ", a.zz); print("U", a.u); print("V", a.v);
  print("X", a.x); print("Y", a.y); print("Z", a.z);
  print("MI", a.mi); print("MS", a.ms); print("MSS", a.mss); print("SP", a.sp);
  return kOk;
}

int cmd_export(const Common& c) {
  const Loaded l = load(c);
  print_config(l.prov.options);
  if (c.out.empty()) throw UsageError("export-mps needs --out");
  const MilpModel model = build_model(l.file.instance, l.file.scenarios, l.file.strategies, l.model);
  write_text(c.out, model_mps(model, l.prov));
  std::cout << "wrote " << c.out << " (" << model.n_cols() << " columns, " << model.n_rows()
            << " rows)\n";
  return kOk;
}

SweepSpec sweep_spec(const Loaded& l, const Common& c, const std::string& param,
                     const std::string& grid) {
  SweepSpec spec;
  try {
    spec.param = parse_sweep_param(param);
    spec.grid = parse_grid(grid);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  spec.strategies = l.file.strategies;
  spec.model = l.model;
  spec.solver = l.solver;
  spec.jobs = std::max(1, c.jobs);
  return spec;
}

int cmd_sweep(const Common& c, const std::string& param, const std::string& grid) {
  Loaded l = load(c);
  const SweepSpec spec = sweep_spec(l, c, param, grid);
  l.prov.options.emplace_back("jobs", std::to_string(spec.jobs));
  l.prov.options.emplace_back("sweep_param", to_string(spec.param));
  l.prov.options.emplace_back("grid", grid);
  print_config(l.prov.options);
  const SweepReport r = run_sweep(l.file.instance, l.file.scenarios, spec);
  const std::string dir = c.out.empty() ? "." : c.out;
  emit_report(r, dir);
  for (const auto& p : r.points)
    std::cout << format_number(p.multiplier) << "  " << p.status << "  "
              << (p.has_solution ? format_number(p.z_total) : "-") << "\n";
  std::cout << "first infeasible multiplier: "
            << (r.first_infeasible ? format_number(*r.first_infeasible) : "none") << "\n";
  std::cout << "wrote " << dir << "/report.{csv,json,svg}\n";
  return kOk;
}

int cmd_compare(const Common& c, const std::vector<std::string>& a,
                const std::vector<std::string>& b, const std::string& param,
                const std::string& grid) {
  Loaded l = load(c);
  const SweepSpec spec = sweep_spec(l, c, param, grid);
  StrategyConfig ca = l.file.strategies, cb = l.file.strategies;
  for (const auto& n : a) *strategy_flag(ca, n) = true;
  for (const auto& n : b) *strategy_flag(cb, n) = true;
  if (ca == cb) throw UsageError("--a and --b give the same configuration");
  std::string an, bn;
  for (const auto& n : a) an += (an.empty() ? "" : ",") + n;
  for (const auto& n : b) bn += (bn.empty() ? "" : ",") + n;
  l.prov.options.emplace_back("jobs", std::to_string(spec.jobs));
  l.prov.options.emplace_back("a", an);
  l.prov.options.emplace_back("b", bn);
  l.prov.options.emplace_back("sweep_param", to_string(spec.param));
  l.prov.options.emplace_back("grid", grid);
  print_config(l.prov.options);
  const CompareReport r = compare_strategies(l.file.instance, l.file.scenarios, ca, cb, spec);
  const std::string dir = c.out.empty() ? "." : c.out;
  emit_report(r, dir);
  for (std::size_t i = 0; i < r.winner.size(); ++i)
    std::cout << format_number(r.a.points[i].multiplier) << "  a:" << r.a.points[i].status
              << "  b:" << r.b.points[i].status << "  winner " << r.winner[i] << "\n";
  std::cout << "verdict: " << r.verdict << "\n";
  if (r.crossover)
    std::cout << "crossover between " << format_number(r.crossover->refined_lower) << " and "
              << format_number(r.crossover->refined_upper) << "\n";
  std::cout << "wrote " << dir << "/report.{csv,json,svg}\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resilient green supply-chain design: build, solve and analyse the two-stage model"};
  app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
  app.require_subcommand(1);
  Common c;

  std::uint64_t gen_seed = 1;
  std::string profile = "paper-like", sets_text;
  auto* gen = app.add_subcommand("generate", "write a seeded synthetic instance");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--profile", profile, "disruption profile: paper-like|severe|none");
  gen->add_option("--sets", sets_text, "I,Ib,J,Jt,K,Kt,M,T,L,S (default: paper-like sizes)");
  gen->add_option("--out", c.out, "output file (default: stdout)");
  gen->add_option("--enable", c.enable, "strategies stored as on")->delimiter(',');

  auto* val = app.add_subcommand("validate", "check an instance file");
  val->add_option("--instance", c.instance, "instance file")->required();
  val->add_option("--enable", c.enable)->delimiter(',');
  val->add_option("--disable", c.disable)->delimiter(',');

  auto* ins = app.add_subcommand("inspect", "print model statistics per family");
  add_model_flags(ins, c);

  bool lp_only = false;
  auto* sol = app.add_subcommand("solve", "solve the model");
  add_model_flags(sol, c);
  add_solver_flags(sol, c);
  sol->add_option("--out", c.out, "solution JSON file");
  sol->add_flag("--lp", lp_only, "solve the LP relaxation only");

  int max_flow = 5;
  long long guard = 10'000'000;
  auto* orc = app.add_subcommand("oracle", "exhaustive optimum of a tiny instance");
  add_model_flags(orc, c);
  orc->add_option("--max-flow", max_flow, "bound on every recourse quantity");
  orc->add_option("--guard", guard, "maximum assignments examined");

  auto* exp = app.add_subcommand("export-mps", "write the model in fixed MPS format");
  add_model_flags(exp, c);
  exp->add_option("--out", c.out, "MPS file")->required();

  std::string param = "cap", grid = "1.0:0.5:0.05";
  auto* swp = app.add_subcommand("sweep", "parameter sweep");
  add_model_flags(swp, c);
  add_solver_flags(swp, c);
  swp->add_option("--param", param, "cap|demand|capacity");
  swp->add_option("--grid", grid, "start:stop:step or comma list");
  swp->add_option("--out", c.out, "output directory");
  swp->add_option("--jobs", c.jobs, "parallel solves");

  std::vector<std::string> sa, sb;
  auto* cmp = app.add_subcommand("compare", "compare two strategy sets along a sweep");
  add_model_flags(cmp, c);
  add_solver_flags(cmp, c);
  cmp->add_option("--a", sa, "strategies of configuration a")->required()->delimiter(',');
  cmp->add_option("--b", sb, "strategies of configuration b")->required()->delimiter(',');
  cmp->add_option("--param", param, "cap|demand|capacity");
  cmp->add_option("--grid", grid, "start:stop:step or comma list");
  cmp->add_option("--out", c.out, "output directory");
  cmp->add_option("--jobs", c.jobs, "parallel solves");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_seed, profile, sets_text, c);
    if (*val) return cmd_validate(c);
    if (*ins) return cmd_inspect(c);
    if (*sol) return cmd_solve(c, lp_only);
    if (*orc) return cmd_oracle(c, max_flow, guard);
    if (*exp) return cmd_export(c);
    if (*swp) return cmd_sweep(c, param, grid);
    if (*cmp) return cmd_compare(c, sa, sb, param, grid);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kUsage;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return kInternal;
}
