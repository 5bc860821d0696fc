#include "commands.hpp"

#include <array>
#include <cmath>
#include <filesystem>

#include "gradshift/error.hpp"
#include "gradshift/gates.hpp"
#include "gradshift/sim.hpp"

namespace gradshift::cli {
namespace {

constexpr double kFdStep = 1e-5;
constexpr double kOracleAgreement = 1e-9;

std::vector<double> optional_angles(const std::string &text) {
  if (text.empty()) {
    return {};
  }
  return parse_angle_list(text);
}

void require_count(std::size_t actual, std::size_t expected, const char *what,
                   RuleMethod method) {
  if (actual != expected) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(to_string(method)) + " needs " +
                    std::to_string(expected) + " " + what + ", got " +
                    std::to_string(actual));
  }
}

GapSet resolve_gaps(const std::string &gaps, const std::string &generator) {
  if (!gaps.empty()) {
    return GapSet::from_values(parse_angle_list(gaps));
  }
  if (!generator.empty()) {
    return unique_gaps(diagonalize(resolve_generator(generator)));
  }
  throw Error(ErrorCode::InvalidArgument, "either --gaps or --generator is required");
}

Json warnings_for(const ShiftRule &rule) {
  Json warnings = Json::array();
  if (rule.ill_conditioned()) {
    warnings.push_back("rule system is ill conditioned (condition number " +
                       std::to_string(rule.condition_number) + ")");
  }
  return warnings;
}

} // namespace

HermitianOperator resolve_generator(const std::string &source) {
  std::error_code ec;
  if (std::filesystem::is_regular_file(source, ec)) {
    return parse_generator(load_json_file(source));
  }
  return catalog_generator(source);
}

ShiftRule build_rule(const GapSet &gaps, RuleMethod method,
                     const std::vector<double> &shifts, double x) {
  const std::size_t s = gaps.size();
  std::vector<double> stencil = shifts;
  switch (method) {
  case RuleMethod::SymmetricGeneral:
    return symmetric_rule(gaps, stencil.empty() ? default_shifts(gaps) : stencil);
  case RuleMethod::ClosedS1: {
    require_count(s, 1, "gaps", method);
    if (stencil.empty()) {
      stencil = default_shifts(gaps);
    }
    require_count(stencil.size(), 1, "shifts", method);
    return closed_s1(gaps.gaps[0], stencil[0]);
  }
  case RuleMethod::TriangulationS1: {
    require_count(s, 1, "gaps", method);
    if (stencil.empty()) {
      const double d = kPi / gaps.gaps[0];
      stencil = {d, -d, 0.0};
    }
    require_count(stencil.size(), 3, "shifts", method);
    return triangulation_s1(gaps.gaps[0],
                            std::array<double, 3>{stencil[0], stencil[1], stencil[2]});
  }
  case RuleMethod::ClosedS2: {
    require_count(s, 2, "gaps", method);
    if (stencil.empty()) {
      stencil = default_shifts(gaps);
    }
    require_count(stencil.size(), 2, "shifts", method);
    return closed_s2(std::array<double, 2>{gaps.gaps[0], gaps.gaps[1]},
                     std::array<double, 2>{stencil[0], stencil[1]});
  }
  case RuleMethod::ClosedS3: {
    require_count(s, 3, "gaps", method);
    if (stencil.empty()) {
      stencil = default_shifts(gaps);
    }
    require_count(stencil.size(), 3, "shifts", method);
    return closed_s3(
        std::array<double, 3>{gaps.gaps[0], gaps.gaps[1], gaps.gaps[2]},
        std::array<double, 3>{stencil[0], stencil[1], stencil[2]});
  }
  case RuleMethod::TriangulationGeneral:
    if (stencil.empty()) {
      stencil = {0.0};
      for (const double d : default_shifts(gaps)) {
        stencil.push_back(d);
        stencil.push_back(-d);
      }
    }
    return triangulation_general(gaps, stencil, x);
  case RuleMethod::RealSymmetric:
    if (stencil.empty()) {
      stencil = real_symmetric_shifts(gaps);
    }
    return real_symmetric_rule(gaps, stencil, x);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown rule method");
}

Json analyze(const AnalyzeOptions &options) {
  const HermitianOperator generator = resolve_generator(options.generator);
  return spectrum_report(diagonalize(generator));
}

Json rule(const RuleOptions &options) {
  const GapSet gaps = resolve_gaps(options.gaps, options.generator);
  const ShiftRule r = build_rule(gaps, parse_rule_method(options.method),
                                 optional_angles(options.shifts),
                                 parse_angle(options.x));
  Json out = rule_to_json(r);
  out["warnings"] = warnings_for(r);
  return out;
}

Json diff(const DiffOptions &options) {
  if (options.circuit.empty()) {
    throw Error(ErrorCode::InvalidArgument, "--circuit is required");
  }
  const Circuit circuit(parse_circuit(load_json_file(options.circuit)));
  const double x = parse_angle(options.x);

  ShiftRule base;
  if (!options.rule_file.empty()) {
    base = rule_from_json(load_json_file(options.rule_file));
  } else {
    const GapSet gaps = options.gaps.empty()
                            ? circuit.generator_gaps()
                            : GapSet::from_values(parse_angle_list(options.gaps));
    base = build_rule(gaps, parse_rule_method(options.method),
                      optional_angles(options.shifts), x);
  }
  const ShiftRule r = apply_chain(base, circuit.spec().dphi_dx);

  Json warnings = warnings_for(r);
  const auto missing = gap_mismatch(circuit, r);
  if (!missing.empty()) {
    Json list = missing;
    warnings.push_back("generator gaps " + list.dump() +
                       " are not covered by the rule; the derivative is biased");
  }

  const double value = evaluate_rule(circuit, x, r);
  Json out = {{"x", x},
              {"value", value},
              {"rule", rule_to_json(rule_at(r, x))},
              {"warnings", warnings}};
  if (options.oracle) {
    const double exact = exact_derivative(circuit, x);
    const double fd = fd_derivative(circuit, x, kFdStep) * circuit.spec().dphi_dx;
    out["oracle"] = {{"exact", exact},
                     {"finite_difference", fd},
                     {"fd_step", kFdStep},
                     {"abs_error_exact", std::abs(value - exact)},
                     {"abs_error_fd", std::abs(value - fd)},
                     {"agrees", std::abs(value - exact) < kOracleAgreement}};
  }
  if (options.shots > 0) {
    out["estimate"] = estimate_to_json(
        estimate_derivative(circuit, x, r, options.shots, options.seed));
  }
  return out;
}

std::vector<GridAxis> parse_grid(const std::string &text) {
  std::vector<GridAxis> axes;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto comma = text.find(',', pos);
    const std::string part =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    const auto c1 = part.find(':');
    const auto c2 = c1 == std::string::npos ? c1 : part.find(':', c1 + 1);
    if (c2 == std::string::npos) {
      throw Error(ErrorCode::ParseError,
                  "grid axis \"" + part + "\" is not start:stop:points");
    }
    GridAxis axis;
    axis.start = parse_angle(part.substr(0, c1));
    axis.stop = parse_angle(part.substr(c1 + 1, c2 - c1 - 1));
    const double points = parse_angle(part.substr(c2 + 1));
    if (points < 2 || points != std::floor(points)) {
      throw Error(ErrorCode::ParseError, "grid points must be an integer >= 2");
    }
    axis.points = static_cast<int>(points);
    axes.push_back(axis);
    if (comma == std::string::npos) {
      break;
    }
    pos = comma + 1;
  }
  if (axes.empty() || axes.size() > 2) {
    throw Error(ErrorCode::ParseError, "grid needs one or two axes");
  }
  return axes;
}

VarianceMapResult variance_map(const VarianceMapOptions &options) {
  GridSpec spec;
  if (!options.preset.empty()) {
    spec = grid_preset(options.preset);
  } else {
    spec.family = parse_grid_family(options.family);
    if (options.gaps.empty() || options.grid.empty()) {
      throw Error(ErrorCode::InvalidArgument,
                  "--gaps and --grid are required without --preset");
    }
    spec.gaps = parse_angle_list(options.gaps);
    const auto axes = parse_grid(options.grid);
    const bool two_d = spec.family != GridFamily::SymmetricS1;
    if (axes.size() != (two_d ? 2u : 1u)) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(to_string(spec.family)) + " needs " +
                      (two_d ? "two" : "one") + " grid axes");
    }
    spec.axis1 = axes[0];
    if (two_d) {
      spec.axis2 = axes[1];
    }
    spec.fixed_shift = parse_angle(options.fixed_shift);
  }

  VarianceMapResult result;
  result.grid = variance_grid(spec);
  const VarianceGrid &g = result.grid;
  Json argmin = Json::array({g.axis1[g.argmin1]});
  if (g.is_2d()) {
    argmin.push_back(g.axis2[g.argmin2]);
  }
  result.summary = {{"family", std::string(to_string(g.family))},
                    {"gaps", g.gaps},
                    {"min_value", g.min_value},
                    {"argmin", argmin},
                    {"rows", g.axis1.size()},
                    {"columns", g.is_2d() ? g.axis2.size() : 1}};
  if (!options.preset.empty()) {
    result.summary["preset"] = options.preset;
  }
  return result;
}

std::vector<CheckResult> verify(const VerifyCliOptions &options) {
  VerifyOptions v;
  v.filter = options.filter;
  v.seed = options.seed;
  if (options.mutation == "flip-closed-s2-sign") {
    v.mutation = VerifyOptions::Mutation::FlipClosedS2Sign;
  } else if (options.mutation != "none") {
    throw Error(ErrorCode::InvalidArgument,
                "unknown mutation \"" + options.mutation + "\"");
  }
  return run_checks(v);
}

} // namespace gradshift::cli
