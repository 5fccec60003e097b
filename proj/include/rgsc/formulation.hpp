#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rgsc/instance.hpp"
#include "rgsc/linear_program.hpp"
#include "rgsc/solver.hpp"

namespace rgsc {

enum class CapMode { PerScenario, Literal };
enum class DelayMode { Expected, Literal };
enum class Integrality { Relaxed, Full };

std::string to_string(CapMode m);
std::string to_string(DelayMode m);
std::string to_string(Integrality m);
CapMode parse_cap_mode(const std::string& s);
DelayMode parse_delay_mode(const std::string& s);
Integrality parse_integrality(const std::string& s);

struct ModelOptions {
  double w_cost = 1.0;
  double w_emission = 1.0;
  CapMode cap_mode = CapMode::PerScenario;
  DelayMode delay_mode = DelayMode::Expected;
  Integrality integrality = Integrality::Relaxed;
  /// Upper bound on every flow, inventory, shortage, safety-stock and
  /// stockpile column (used to align with bounded enumeration).
  double flow_upper = kInf;
};

/// Column families. Index tuples (0-based):
///   XX (i,j,t,l)  YY (j,k,t,l)  ZZ (k,m,t,l)  U (j)  V (k)
///   X (i,j,t,l,s) Y (j,k,t,l,s) Z (k,m,t,l,s) MI/MS/MSS/SP (j,t,s)
enum class Family { XX, YY, ZZ, U, V, X, Y, Z, MI, MS, MSS, SP };
inline constexpr int kNumFamilies = 12;

enum class RowFamily {
  LinkX, LinkY, LinkZ,
  ModeX, ModeY, ModeZ,
  Balance, WarehouseFlow, Demand,
  EmissionCap, MinSuppliers,
  MfgCapacity, WhCapacity,
  OpenMfg, OpenWhIn, OpenWhOut,
};
inline constexpr int kNumRowFamilies = 16;

const char* family_name(Family f);
const char* row_family_name(RowFamily f);
/// Labels of the index tuple, e.g. "ijtl" for XX.
const char* family_labels(Family f);
const char* row_family_labels(RowFamily f);

using Index = std::array<int, 5>;

struct VarKey {
  Family family;
  Index index{};
  bool operator==(const VarKey&) const = default;
};

struct RowTag {
  RowFamily family;
  Index index{};
};

/// "demand(m=1,t=1,s=1)" with 1-based indices.
std::string describe(const VarKey& key);
std::string describe(const RowTag& tag);

/// Bijection between declared variable tuples and columns 0..n-1.
class VariableMap {
 public:
  VariableMap() = default;
  explicit VariableMap(const NetworkSets& sets);

  int add(const VarKey& key);
  /// Column of the tuple, or -1 when the variable is not part of the model.
  int col(Family f, int a, int b = 0, int c = 0, int d = 0, int e = 0) const;
  int col(const VarKey& key) const;
  const VarKey& key(int col) const { return keys_[col]; }
  int size() const { return static_cast<int>(keys_.size()); }
  int family_count(Family f) const;

 private:
  std::size_t slot(Family f, const Index& idx) const;
  std::array<std::array<int, 5>, kNumFamilies> dims_{};
  std::array<std::vector<int>, kNumFamilies> grid_;
  std::vector<VarKey> keys_;
};

struct ModelInputs {
  Instance instance;
  ScenarioSet scenarios;
  StrategyConfig strategies;
  ModelOptions options;
};

enum class Relation { LessEqual, Equal, GreaterEqual };

struct MilpModel {
  std::shared_ptr<const ModelInputs> inputs;
  VariableMap var_map;
  std::vector<double> objective_cost;      // Z1 coefficients (dense, length n_cols)
  std::vector<double> objective_emission;  // Z2 coefficients
  double cost_constant = 0.0;              // information-sharing charge
  double w_cost = 1.0, w_emission = 1.0;
  std::vector<Relation> relation;
  std::vector<double> rhs;
  std::vector<RowTag> row_tags;
  /// Combined objective w1*cost + w2*emission, rows, bounds, integrality and
  /// deterministic MPS-safe names.
  LinearProgram lp;

  int n_cols() const { return lp.num_cols(); }
  int n_rows() const { return lp.num_rows(); }
};

/// Assembles the deterministic equivalent. Throws ConfigError for
/// inconsistent strategies or options, std::invalid_argument when the
/// instance fails validation.
MilpModel build_model(const Instance& inst, const ScenarioSet& scen, const StrategyConfig& cfg,
                      const ModelOptions& opts = {});

struct FamilyStats {
  std::string family;
  long rows = 0;
  long nonzeros = 0;
};
struct ModelStats {
  long cols = 0, rows = 0, nonzeros = 0, integer_cols = 0;
  std::vector<std::pair<std::string, long>> cols_by_family;
  std::vector<FamilyStats> rows_by_family;
};
ModelStats model_stats(const MilpModel& model);

struct ObjectiveBreakdown {
  double c1 = 0.0;
  std::vector<double> c2, c3, c4, emission;  // per scenario
  double setup_cost = 0.0;
  double z1 = 0.0, z2 = 0.0, z_total = 0.0;
};

/// Recomputes every cost and emission term from the instance data and the
/// point's variable values, independently of the model's objective vectors.
/// C3 includes safety-stock holding and the stockpile premium. Throws
/// std::invalid_argument on dimension mismatch.
ObjectiveBreakdown evaluate_solution(const MilpModel& model, const std::vector<double>& point);

struct FeasibilityViolation {
  enum Kind { Row, Bound, Integrality } kind;
  std::string tag;  // family name
  std::vector<std::pair<char, int>> index;  // labelled 1-based indices
  double amount;
  std::string describe() const;
};

std::vector<FeasibilityViolation> check_feasibility(const MilpModel& model,
                                                    const std::vector<double>& point, double tol,
                                                    double tol_int = 1e-6);

/// Maps a point of one model onto another by variable tuple; columns absent
/// from the source are zero. Facility-open binaries are recomputed from the
/// link binaries.
std::vector<double> transfer_point(const MilpModel& from, const std::vector<double>& point,
                                   const MilpModel& to);

/// Rounds the LP link binaries (largest mode per link, extra suppliers for
/// multiple sourcing), opens incident temporary facilities, re-solves the
/// remaining LP and closes unused links.
std::optional<std::vector<double>> link_rounding_heuristic(const MilpModel& model,
                                                           const std::vector<double>& lp_point,
                                                           const SolverOptions& opts);

LpResult solve_model_lp(const MilpModel& model, const SolverOptions& opts = {});
MipResult solve_model(const MilpModel& model, const SolverOptions& opts = {},
                      std::optional<std::vector<double>> start = std::nullopt);

}  // namespace rgsc
