#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gradshift/io.hpp"
#include "gradshift/rules.hpp"
#include "gradshift/sampling.hpp"
#include "gradshift/verify.hpp"

namespace gradshift::cli {

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerify = 4;

/// A catalog name, or a path to a JSON generator file when one exists.
HermitianOperator resolve_generator(const std::string &source);

/// Builds a rule for `gaps`; empty `shifts` selects the method's default
/// stencil. `x` is used by point-dependent methods only.
ShiftRule build_rule(const GapSet &gaps, RuleMethod method,
                     const std::vector<double> &shifts, double x);

struct AnalyzeOptions {
  std::string generator;
};
Json analyze(const AnalyzeOptions &options);

struct RuleOptions {
  std::string generator;
  std::string gaps;
  std::string method = "symmetric-general";
  std::string shifts;
  std::string x = "0";
};
Json rule(const RuleOptions &options);

struct DiffOptions {
  std::string circuit;
  std::string x = "0";
  std::string rule_file;
  std::string method = "symmetric-general";
  std::string gaps;
  std::string shifts;
  bool oracle = false;
  std::uint64_t shots = 0;
  std::uint64_t seed = 0;
};
Json diff(const DiffOptions &options);

struct VarianceMapOptions {
  std::string preset;
  std::string family = "symmetric-s1";
  std::string gaps;
  std::string grid;
  std::string fixed_shift = "0";
};
struct VarianceMapResult {
  VarianceGrid grid;
  Json summary;
};
VarianceMapResult variance_map(const VarianceMapOptions &options);

struct VerifyCliOptions {
  std::string filter;
  std::string mutation = "none";
  std::uint64_t seed = 0;
};
std::vector<CheckResult> verify(const VerifyCliOptions &options);

/// Parses "start:stop:points[,start:stop:points]".
std::vector<GridAxis> parse_grid(const std::string &text);

} // namespace gradshift::cli
