#pragma once

#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "rgsc/formulation.hpp"

namespace rgsc {

using Json = nlohmann::ordered_json;

/// Tool version, instance hash and the full effective option set; embedded
/// in every output file.
struct Provenance {
  std::string instance_hash;
  std::vector<std::pair<std::string, std::string>> options;
  Json to_json() const;
  /// "# key: value" lines for text formats.
  std::string comment_block(const std::string& prefix) const;
};

/// Effective options as ordered key/value pairs.
std::vector<std::pair<std::string, std::string>> describe_options(const StrategyConfig& cfg,
                                                                  const ModelOptions& model,
                                                                  const SolverOptions& solver);

/// Solution file: objective block (Z1, Z2, Z_Total with C1..C4 and E per
/// scenario), nonzero first-stage binaries, nonzero recourse quantities per
/// scenario. Indices are 1-based.
Json solution_json(const MilpModel& model, const MipResult& result, const Provenance& prov);

/// Provenance of a run on `file` (hash of the file including strategies).
Provenance make_provenance(const InstanceFile& file, const ModelOptions& model,
                           const SolverOptions& solver);

/// Fixed-format MPS of the model preceded by "* " provenance comments.
std::string model_mps(const MilpModel& model, const Provenance& prov);

/// Shortest round-trip decimal rendering.
std::string format_number(double v);

}  // namespace rgsc
