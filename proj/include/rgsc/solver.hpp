#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rgsc/linear_program.hpp"

namespace rgsc {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };
enum class MipStatus { Optimal, Infeasible, NodeLimit, TimeLimit, GapLimit };
enum class Branching { MostFractional, PseudoCost };

std::string to_string(LpStatus s);
std::string to_string(MipStatus s);
std::string to_string(Branching b);
Branching parse_branching(const std::string& name);

struct SolverOptions {
  double tol_feas = 1e-7;  // row and bound feasibility
  double tol_int = 1e-6;   // integrality
  double tol_opt = 1e-9;   // reduced-cost sign and pruning
  long node_limit = 1'000'000;
  double time_limit = 1e30;  // seconds
  double mip_gap = 0.0;      // stop once (objective - bound) / max(1, |objective|) <= mip_gap
  long iteration_limit = 5'000'000;
  int refactor_interval = 100;
  int degenerate_stall = 50;  // degenerate pivots before switching to Bland's rule
  Branching branching = Branching::MostFractional;
  std::uint64_t seed = 0;
};

struct LpResult {
  LpStatus status = LpStatus::Infeasible;
  double objective = 0.0;
  double dual_objective = 0.0;
  std::vector<double> primal;
  std::vector<double> dual;          // per row
  std::vector<double> reduced_cost;  // per column
  long iterations = 0;
};

/// Bounded-variable revised primal simplex. Phase 1 minimises a sum of
/// artificials; Dantzig pricing with a Harris ratio test, switching to
/// Bland's rule while degenerate pivots stall. Columns fixed by their bounds
/// are eliminated before the solve.
LpResult solve_lp(const LinearProgram& lp, const SolverOptions& opts = {});

/// Returns a feasible point (every column assigned) or nothing.
using PrimalHeuristic =
    std::function<std::optional<std::vector<double>>(const std::vector<double>& lp_point)>;

struct MipResult {
  MipStatus status = MipStatus::Infeasible;
  std::optional<std::vector<double>> incumbent;
  double objective = kInf;
  double bound = -kInf;
  long nodes = 0;
  double gap = kInf;
  double root_lp = -kInf;
  double seconds = 0.0;
  std::vector<double> bound_trace;  // global best bound after each node
};

struct MipHooks {
  PrimalHeuristic root_heuristic;
  std::optional<std::vector<double>> start;  // initial incumbent, checked for feasibility
};

/// Branch-and-bound over integer columns: depth-first until the first
/// incumbent, then best-bound. Branches on the column whose fractional part
/// is closest to 0.5 (ties: lowest index) unless pseudo-cost branching is
/// selected.
MipResult solve_mip(const LinearProgram& lp, const SolverOptions& opts = {},
                    const MipHooks& hooks = {});

struct LpViolation {
  enum Kind { Row, Bound, Integrality } kind;
  int index;  // row or column
  double amount;
};

/// Generic feasibility check of a point against rows, bounds and
/// integrality.
std::vector<LpViolation> check_point(const LinearProgram& lp, const std::vector<double>& x,
                                     double tol_feas, double tol_int);

}  // namespace rgsc
