#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace gradshift {

struct CheckResult {
  std::string id;   // "1", "2", ..., "9a", "9c-scaled"
  std::string name;
  std::vector<std::string> tags;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  /// Deliberate defects used to confirm that the suite detects them.
  enum class Mutation { None, FlipClosedS2Sign };

  /// Substring matched against check id, name and tags; empty runs all.
  std::string filter;
  Mutation mutation = Mutation::None;
  std::uint64_t seed = 0;
};

/// Ids, names and tags of every check, in execution order.
std::vector<CheckResult> list_checks();

/// Runs the selected checks. Failures are results; exceptions thrown by a
/// check are caught and reported as a failed result.
std::vector<CheckResult> run_checks(const VerifyOptions &options = {});

nlohmann::json checks_to_json(const std::vector<CheckResult> &results);

} // namespace gradshift
