#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgsc/formulation.hpp"
#include "rgsc/report.hpp"

namespace rgsc {

enum class SweepParam { Cap, Demand, Capacity };
std::string to_string(SweepParam p);
/// Accepts "cap", "demand", "capacity" and the "-fraction" forms.
SweepParam parse_sweep_param(const std::string& s);

/// "start:stop:step" (inclusive, either direction) or a comma list.
std::vector<double> parse_grid(const std::string& text);

struct SweepSpec {
  SweepParam param = SweepParam::Cap;
  std::vector<double> grid;
  StrategyConfig strategies;
  ModelOptions model;
  SolverOptions solver;
  int jobs = 1;
  /// Offer every point's incumbent to every other point (see run_sweep).
  bool cross_seed = true;
};

struct SweepPoint {
  double multiplier = 0.0;
  std::string status;  // solver status, or "error"
  bool has_solution = false;
  double z1 = 0.0, z2 = 0.0, z_total = 0.0;
  double bound = 0.0, gap = 0.0;
  long nodes = 0;
  int temp_open = 0;          // open temporary facilities
  double safety_stock = 0.0;  // expected total MSS over manufacturers and periods
  double shortage = 0.0;      // expected total MS
  bool seeded = false;        // incumbent taken from another grid point
  bool operator==(const SweepPoint&) const = default;
};

struct SweepReport {
  SweepParam param = SweepParam::Cap;
  StrategyConfig strategies;
  std::vector<SweepPoint> points;
  /// First grid point (in grid order) proven infeasible.
  std::optional<double> first_infeasible;
  Provenance provenance;
  bool operator==(const SweepReport& o) const {
    return param == o.param && strategies == o.strategies && points == o.points &&
           first_infeasible == o.first_infeasible &&
           provenance.instance_hash == o.provenance.instance_hash &&
           provenance.options == o.provenance.options;
  }
};

/// Scales the parameter: cap multiplies every Cap_t, demand every D_mt^s
/// (big_m is raised when needed), capacity every Mc_j and Wc_k.
GeneratedInstance apply_multiplier(const Instance& inst, const ScenarioSet& scen, SweepParam p,
                                   double factor);

/// One solve per grid point; solver failures become per-point statuses.
/// With cross_seed on, each point finally keeps the best incumbent among
/// its own and those of the other points that are feasible for it, which
/// makes the result independent of evaluation order and of scheduling.
SweepReport run_sweep(const Instance& inst, const ScenarioSet& scen, const SweepSpec& spec);

struct Crossover {
  double lower = 0.0, upper = 0.0;  // bracketing grid multipliers
  double refined_lower = 0.0, refined_upper = 0.0;
  std::vector<SweepPoint> refinement_a, refinement_b;
  bool operator==(const Crossover&) const = default;
};

struct CompareReport {
  SweepReport a, b;
  /// Per grid point: "a", "b", "tie" or "n/a" (a side without a solution).
  std::vector<std::string> winner;
  std::optional<Crossover> crossover;
  /// "crossover"; otherwise a constant-sign verdict: "a-cheaper" / "b-cheaper"
  /// (strictly cheaper somewhere, never worse) or "equal" (ties only);
  /// "undetermined" when no grid point has solutions for both.
  std::string verdict;
  bool operator==(const CompareReport&) const = default;
};

/// Sweeps both configurations and locates the first sign flip of
/// Z_a - Z_b, refined by up to four bisection steps (two solves each).
/// Throws std::invalid_argument when the configurations are equal.
CompareReport compare_strategies(const Instance& inst, const ScenarioSet& scen,
                                 const StrategyConfig& a, const StrategyConfig& b,
                                 const SweepSpec& spec);

Json report_to_json(const SweepReport& r);
SweepReport report_from_json(const Json& j);
Json compare_to_json(const CompareReport& r);
CompareReport compare_from_json(const Json& j);

/// CSV columns: multiplier,status,z1,z2,z_total,bound,gap,nodes,temp_open,
/// safety_stock,shortage,seeded. Preceded by "# " provenance lines.
std::string report_csv(const SweepReport& r);
/// Line chart of Z_total, Z1 and Z2 against the multiplier; infeasible
/// points are shaded.
std::string report_svg(const SweepReport& r, const std::string& title = {});
std::string compare_csv(const CompareReport& r);
std::string compare_svg(const CompareReport& r, const std::string& title = {});

/// Writes report.csv, report.json and report.svg (or the subset in
/// `formats`) into dir.
void emit_report(const SweepReport& r, const std::filesystem::path& dir,
                 const std::vector<std::string>& formats = {"csv", "json", "svg"});
void emit_report(const CompareReport& r, const std::filesystem::path& dir,
                 const std::vector<std::string>& formats = {"csv", "json", "svg"});

}  // namespace rgsc
