// Acceptance checks on the paper-like instance and the tiny-instance oracle.
// Prints one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rgsc/analysis.hpp"
#include "rgsc/mps.hpp"
#include "rgsc/oracle.hpp"
#include "rgsc/report.hpp"
#include "support.hpp"

using namespace rgsc;
using namespace rgsc::testing;

namespace {

const std::string kSource = RGSC_SOURCE_DIR;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(1.0, std::max(std::abs(a), std::abs(b)));
}

std::string num(double v) { return format_number(v); }

/// Collects every incumbent produced below and audits it (criterion 2), and
/// every LP relaxation next to its MIP (criterion 6).
struct Ledger {
  long incumbents = 0;
  long lp_pairs = 0;
  std::vector<std::string> identity_failures;
  std::vector<std::string> bound_failures;

  void audit(const std::string& what, const MilpModel& m, const MipResult& r) {
    if (!r.incumbent) return;
    ++incumbents;
    const auto viol = check_feasibility(m, *r.incumbent, 1e-6);
    if (!viol.empty()) identity_failures.push_back(what + ": " + viol.front().describe());
    const auto br = evaluate_solution(m, *r.incumbent);
    if (!rel_close(br.z_total, r.objective, 1e-9))
      identity_failures.push_back(what + ": evaluated " + num(br.z_total) + " vs solver " +
                                  num(r.objective));
    if (!rel_close(br.z_total, m.w_cost * br.z1 + m.w_emission * br.z2, 1e-9))
      identity_failures.push_back(what + ": Z_total != w1*Z1 + w2*Z2");
  }

  void lp_vs_mip(const std::string& what, const MilpModel& m, const MipResult& mip) {
    const LpResult lp = solve_model_lp(m);
    ++lp_pairs;
    if (lp.status == LpStatus::Infeasible) {
      if (mip.incumbent) bound_failures.push_back(what + ": LP infeasible but MIP has a plan");
      return;
    }
    if (lp.status != LpStatus::Optimal) {
      bound_failures.push_back(what + ": LP status " + to_string(lp.status));
      return;
    }
    if (!rel_close(lp.objective, lp.dual_objective, 1e-9))
      bound_failures.push_back(what + ": primal " + num(lp.objective) + " dual " +
                               num(lp.dual_objective));
    if (mip.incumbent && lp.objective > mip.objective + 1e-9 * std::max(1.0, std::abs(mip.objective)))
      bound_failures.push_back(what + ": LP " + num(lp.objective) + " > MIP " + num(mip.objective));
  }
};

struct Outcome {
  bool pass;
  std::string detail;
};

struct Line {
  int id;
  std::string title;
  Outcome outcome;
  double secs;
};
std::vector<Line> lines;

void run(int id, const std::string& title, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  lines.push_back({id, title, o, seconds_since(t0)});
  std::fprintf(stderr, "criterion %d done in %.1f s\n", id, lines.back().secs);
}

SolverOptions gap_options(double gap) {
  SolverOptions o;
  o.mip_gap = gap;
  o.time_limit = 120.0;
  return o;
}

std::string slurp(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  Ledger ledger;
  const GeneratedInstance paper = generate_instance(1, paper_like_sets(), "paper-like");
  const Instance& inst = paper.instance;
  const ScenarioSet& scen = paper.scenarios;
  const double gap = 0.01;

  // 1. Oracle equivalence on tiny instances.
  run(1, "oracle equivalence", [&]() -> Outcome {
    int matched = 0, infeasible = 0, guarded = 0;
    std::string mismatch;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::uint64_t seed = 1; seed <= 40; ++seed) {
      const TinyCase tc = random_tiny_case(seed);
      oracle::Result orc;
      try {
        orc = oracle::enumerate_optimal(tc.instance, tc.scenarios, tc.strategies,
                                        {tc.w_cost, tc.w_emission, false}, tc.max_flow);
      } catch (const oracle::GuardExceeded&) {
        ++guarded;
        continue;
      }
      const MilpModel m = build_model(tc.instance, tc.scenarios, tc.strategies, tiny_options(tc));
      const MipResult mip = solve_model(m);
      const std::string tag = "tiny seed " + std::to_string(seed);
      ledger.audit(tag, m, mip);
      ledger.lp_vs_mip(tag, m, mip);
      if (orc.feasible != bool(mip.incumbent)) {
        mismatch += " seed " + std::to_string(seed) + " feasibility differs;";
      } else if (!orc.feasible) {
        ++infeasible;
      } else if (!rel_close(orc.objective, mip.objective, 1e-9)) {
        mismatch += " seed " + std::to_string(seed) + ": oracle " + num(orc.objective) + " mip " +
                    num(mip.objective) + ";";
      } else {
        ++matched;
      }
    }
    const double secs = seconds_since(t0);
    const bool pass = mismatch.empty() && matched >= 20 && secs < 60.0;
    return {pass, std::to_string(matched) + " optima equal within 1e-9, " +
                      std::to_string(infeasible) + " agreed infeasible, " +
                      std::to_string(guarded) + " beyond the enumeration guard skipped" + mismatch};
  });

  // 3. Strategy monotonicity (run before 2 so its incumbents are audited).
  double z_off = 0.0;
  MilpModel off_model;
  std::vector<double> off_point;
  run(3, "strategy monotonicity", [&]() -> Outcome {
    const SolverOptions so = gap_options(gap);
    StrategyConfig ms_cfg;
    ms_cfg.multiple_sourcing = true;
    const MilpModel ms = build_model(inst, scen, ms_cfg);
    const MipResult ms_res = solve_model(ms, so);
    ledger.audit("multiple sourcing", ms, ms_res);
    if (!ms_res.incumbent) return {false, "multiple sourcing found no plan"};

    // all-off model started from the multiple-sourcing plan, which is feasible for it
    off_model = build_model(inst, scen, {});
    const MipResult off = solve_model(off_model, so, transfer_point(ms, *ms_res.incumbent, off_model));
    ledger.audit("all off", off_model, off);
    ledger.lp_vs_mip("all off", off_model, off);
    if (!off.incumbent) return {false, "all-off found no plan"};
    z_off = off.objective;
    off_point = *off.incumbent;

    std::string detail = "off " + num(z_off) + "; multiple_sourcing " + num(ms_res.objective);
    bool pass = ms_res.objective >= z_off - 1e-9;
    const std::pair<const char*, StrategyConfig> variants[] = {
        {"safety_stock", {false, false, true, false, false, false}},
        {"stockpiling", {false, false, false, true, false, false}},
        {"backup_suppliers", {true, false, false, false, false, false}},
        {"temporary_facilities", {false, false, false, false, true, false}},
    };
    for (const auto& [name, cfg] : variants) {
      const MilpModel m = build_model(inst, scen, cfg);
      const MipResult r = solve_model(m, so, transfer_point(off_model, off_point, m));
      ledger.audit(name, m, r);
      if (!r.incumbent) return {false, std::string(name) + " found no plan"};
      detail += std::string("; ") + name + " " + num(r.objective);
      pass = pass && r.objective <= z_off + 1e-9;
    }
    detail += " (MIP gap " + num(gap) + ", each strategy started from the all-off plan)";
    return {pass, detail};
  });

  // 4. Cap sweep shape.
  run(4, "cap sweep shape", [&]() -> Outcome {
    SweepSpec s;
    s.param = SweepParam::Cap;
    s.grid = parse_grid("1:0:0.05");
    s.solver = gap_options(gap);
    s.jobs = std::max(1u, std::thread::hardware_concurrency());
    const SweepReport r = run_sweep(inst, scen, s);
    if (!r.first_infeasible) return {false, "no infeasible multiplier on the grid"};
    const double th = *r.first_infeasible;
    bool pass = th > 0.0 && th < 1.0;
    double last = -kInf;
    std::string detail;
    for (const auto& p : r.points) {
      if (p.multiplier > th) {
        if (!p.has_solution) pass = false;
        else if (p.z_total < last - 1e-9 * std::abs(last)) pass = false;
        last = p.z_total;
      } else if (p.status != "infeasible") {
        pass = false;
      }
    }
    detail = "first infeasible multiplier " + num(th) + ", last feasible Z_total " + num(last) +
             " (1.0: " + num(r.points.front().z_total) + "), non-decreasing and persistent";
    if (!pass) detail = "shape violated; " + detail;
    return {pass, detail};
  });

  // 5. Safety stock vs stockpiling under capacity reduction.
  run(5, "safety stock vs stockpiling", [&]() -> Outcome {
    SweepSpec s;
    s.param = SweepParam::Capacity;
    s.grid = parse_grid("1:0.8:0.05");
    s.solver = gap_options(gap);
    s.jobs = std::max(1u, std::thread::hardware_concurrency());
    StrategyConfig ss, sp;
    ss.safety_stock = true;
    sp.stockpiling = true;
    const CompareReport first = compare_strategies(inst, scen, ss, sp, s);
    s.jobs = 1;
    const CompareReport again = compare_strategies(inst, scen, ss, sp, s);
    const bool deterministic = first == again;
    std::string detail = "verdict " + first.verdict;
    if (first.crossover)
      detail += " between " + num(first.crossover->refined_lower) + " and " +
                num(first.crossover->refined_upper);
    detail += "; winners";
    for (std::size_t i = 0; i < first.winner.size(); ++i)
      detail += " " + num(first.a.points[i].multiplier) + ":" + first.winner[i];
    detail += deterministic ? "; identical on rerun" : "; rerun differs";
    const bool reported = first.crossover.has_value() || first.verdict == "a-cheaper" ||
                          first.verdict == "b-cheaper" || first.verdict == "equal";
    return {reported && deterministic, detail};
  });

  // 7. Determinism and scale.
  run(7, "determinism and scale", [&]() -> Outcome {
    const MilpModel m = build_model(inst, scen, {});
    auto t0 = std::chrono::steady_clock::now();
    const LpResult lp = solve_model_lp(m);
    const double lp_secs = seconds_since(t0);
    SolverOptions so = gap_options(gap);
    so.seed = 7;
    t0 = std::chrono::steady_clock::now();
    const MipResult a = solve_model(m, so);
    const double mip_secs = seconds_since(t0);
    const MipResult b = solve_model(m, so);
    ledger.audit("scale run", m, a);
    const Provenance prov = make_provenance({inst, scen, {}}, {}, so);
    const bool identical = solution_json(m, a, prov).dump(2) == solution_json(m, b, prov).dump(2) &&
                           a.nodes == b.nodes;
    const bool pass = lp.status == LpStatus::Optimal && lp_secs < 10.0 && a.incumbent &&
                      a.gap <= gap && mip_secs < 120.0 && identical;
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "LP %.2f s, MIP gap %.4f%% after %ld nodes in %.2f s, repeat run %s", lp_secs,
                  100.0 * a.gap, a.nodes, mip_secs, identical ? "byte-identical" : "differs");
    return {pass, buf};
  });

  // 8. MPS goldens and round trip.
  run(8, "MPS goldens", [&]() -> Outcome {
    std::string detail;
    bool pass = true;
    for (const char* name : {"tiny", "small_all"}) {
      InstanceFile f = read_instance(kSource + "/tests/data/" +
                                     (std::string(name) == "tiny" ? "tiny" : "small") + ".json");
      if (std::string(name) == "small_all") f.strategies = {true, true, true, true, true, true};
      const MilpModel m = build_model(f.instance, f.scenarios, f.strategies);
      const std::string golden_path = kSource + "/tests/golden/" + name + ".mps";
      const bool same = model_mps(m, make_provenance(f, {}, {})) == slurp(golden_path);
      const LinearProgram back = read_mps(std::filesystem::path(golden_path));
      const LpResult x = solve_model_lp(m), y = solve_lp(back);
      const bool round = x.status == LpStatus::Optimal && y.status == LpStatus::Optimal &&
                         rel_close(x.objective, y.objective, 1e-9);
      const MipResult mip = solve_model(m);
      ledger.audit(name, m, mip);
      ledger.lp_vs_mip(name, m, mip);
      if (!detail.empty()) detail += "; ";
      detail += std::string(name) + (same ? " identical" : " differs") +
                (round ? ", round trip LP " + num(y.objective) : ", round trip mismatch");
      pass = pass && same && round;
    }
    return {pass, detail};
  });

  // 2. Identities over every incumbent produced above.
  run(2, "feasibility and decomposition identities", [&]() -> Outcome {
    // the published decomposition
    const bool paper_identity = rel_close(4451676.10 + 3553815.97, 8005492.07, 1e-9);
    std::string detail = std::to_string(ledger.incumbents) +
                         " incumbents feasible at 1e-6 and evaluated within 1e-9";
    if (!ledger.identity_failures.empty()) detail = ledger.identity_failures.front();
    detail += paper_identity ? "; published Z1 + Z2 = Z_Total holds" : "; published identity fails";
    return {ledger.identity_failures.empty() && paper_identity && ledger.incumbents > 0, detail};
  });

  // 6. LP bound sanity over every model solved above.
  run(6, "LP bound sanity", [&]() -> Outcome {
    if (!ledger.bound_failures.empty()) return {false, ledger.bound_failures.front()};
    return {ledger.lp_pairs > 0, std::to_string(ledger.lp_pairs) +
                                     " models: LP <= MIP, primal = dual within 1e-9"};
  });

  std::sort(lines.begin(), lines.end(), [](const Line& a, const Line& b) { return a.id < b.id; });
  int failures = 0;
  for (const Line& l : lines) {
    std::printf("[%s] %d %s: %s (%.1f s)\n", l.outcome.pass ? "PASS" : "FAIL", l.id,
                l.title.c_str(), l.outcome.detail.c_str(), l.secs);
    failures += !l.outcome.pass;
  }
  std::printf("%s\n", failures == 0 ? "all acceptance criteria pass"
                                    : (std::to_string(failures) + " criteria fail").c_str());
  return failures == 0 ? 0 : 1;
}
