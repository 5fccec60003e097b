#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "rgsc/instance.hpp"

namespace rgsc::oracle {

/// A complete plan over the full index spaces (inactive entities stay 0).
///   xx [I'][J'][T][L]   yy [J'][K'][T][L]   zz [K'][M][T][L]
///   u [J']  v [K']
///   x [I'][J'][T][L][S] y [J'][K'][T][L][S] z [K'][M][T][L][S]
///   mi, ms, mss, sp [J'][T][S]
struct Assignment {
  Tensor xx, yy, zz, u, v, x, y, z, mi, ms, mss, sp;
  bool operator==(const Assignment&) const = default;
};

Assignment empty_assignment(const NetworkSets& sets);

struct Weights {
  double cost = 1.0;
  double emission = 1.0;
  /// Delay cost summed over scenarios without probabilities.
  bool literal_delay = false;
};

struct Objective {
  double z1 = 0.0, z2 = 0.0, total = 0.0;
};

/// Cost and emission of a plan, computed term by term from the data.
Objective evaluate(const Instance& inst, const ScenarioSet& scen, const StrategyConfig& cfg,
                   const Weights& w, const Assignment& a);

struct CheckOptions {
  double tol = 1e-6;
  bool integer_flows = false;
  double flow_upper = 1e300;
};

/// Every violated condition of the plan, one readable line each. Emission
/// caps are enforced per period and scenario.
std::vector<std::string> check(const Instance& inst, const ScenarioSet& scen,
                               const StrategyConfig& cfg, const Assignment& a,
                               const CheckOptions& opts = {});

class GuardExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Result {
  bool feasible = false;
  double objective = 0.0;
  Assignment assignment;
  long long assignments = 0;  // complete candidates examined
};

/// Exhaustive search over every first-stage choice (each link off or on in
/// one mode, each temporary facility open or closed) and every integer
/// second-stage plan with all recourse quantities in [0, max_flow].
/// Scenarios are searched independently, periods by dynamic programming
/// over the (MI, MS, MSS) state. Throws GuardExceeded once more than
/// `guard` candidates have been examined.
Result enumerate_optimal(const Instance& inst, const ScenarioSet& scen, const StrategyConfig& cfg,
                         const Weights& w, int max_flow, long long guard = 10'000'000);

}  // namespace rgsc::oracle
