#include "gradshift/rules.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>
#include <sstream>
#include <string>

#include "gradshift/error.hpp"
#include "gradshift/linalg.hpp"

namespace gradshift {
namespace {

constexpr double kSineFloor = 1e-12;
constexpr double kDistinctShift = 1e-12;
constexpr int kMaxShiftStretches = 20;

std::string describe(std::span<const double> values, bool in_pi = true) {
  std::ostringstream out;
  out << "[";
  for (std::size_t i = 0; i < values.size(); ++i) {
    out << (i ? ", " : "");
    if (in_pi) {
      out << values[i] / kPi << "pi";
    } else {
      out << values[i];
    }
  }
  out << "]";
  return out.str();
}

void require_distinct(std::span<const double> shifts) {
  for (std::size_t i = 0; i < shifts.size(); ++i) {
    for (std::size_t j = i + 1; j < shifts.size(); ++j) {
      if (std::abs(shifts[i] - shifts[j]) <= kDistinctShift) {
        throw Error(ErrorCode::DegenerateStencil,
                    "shifts " + std::to_string(i) + " and " +
                        std::to_string(j) + " coincide in " +
                        describe(shifts));
      }
    }
  }
}

void require_finite(std::span<const double> values, const char *what) {
  for (const double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::InvalidArgument,
                  std::string(what) + " must be finite");
    }
  }
}

ShiftRule symmetric_from_weights(RuleMethod method, GapSet gaps,
                                 std::span<const double> shifts,
                                 std::span<const double> weights,
                                 double condition) {
  ShiftRule rule;
  rule.method = method;
  rule.gaps = std::move(gaps);
  rule.condition_number = condition;
  rule.terms.reserve(2 * shifts.size());
  for (std::size_t l = 0; l < shifts.size(); ++l) {
    rule.terms.push_back({shifts[l], weights[l]});
    rule.terms.push_back({-shifts[l], -weights[l]});
  }
  return rule;
}

std::size_t reference_index(std::span<const double> shifts) {
  const auto it = std::find(shifts.begin(), shifts.end(), 0.0);
  return it == shifts.end() ? 0
                            : static_cast<std::size_t>(it - shifts.begin());
}

// Difference rows f(x+d_l) - f(x+d_ref) expressed in the unknowns
// (Re O_s, Im O_s). Returns the weights on the raw function values.
ShiftRule solve_difference_system(RuleMethod method, const GapSet &gaps,
                                  std::span<const double> shifts, double x,
                                  bool with_imaginary) {
  const std::size_t s_count = gaps.size();
  const std::size_t unknowns = with_imaginary ? 2 * s_count : s_count;
  const std::size_t ref = reference_index(shifts);
  const double d_ref = shifts[ref];

  RMatrix system(static_cast<Eigen::Index>(unknowns),
                 static_cast<Eigen::Index>(unknowns));
  std::vector<std::size_t> rows;
  for (std::size_t l = 0; l < shifts.size(); ++l) {
    if (l != ref) {
      rows.push_back(l);
    }
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double d = shifts[rows[r]];
    for (std::size_t s = 0; s < s_count; ++s) {
      const double gap = gaps.gaps[s];
      const double amp = 4.0 * std::sin((d_ref - d) * gap / 4.0);
      const double phase = (2.0 * x + d_ref + d) * gap / 4.0;
      const auto ri = static_cast<Eigen::Index>(r);
      system(ri, static_cast<Eigen::Index>(s)) = amp * std::sin(phase);
      if (with_imaginary) {
        system(ri, static_cast<Eigen::Index>(s_count + s)) =
            amp * std::cos(phase);
      }
    }
  }

  // df/dx = sum_s gap_s R_s, R_s = -sin(x gap/2) Re O_s - cos(x gap/2) Im O_s.
  RVector contraction(static_cast<Eigen::Index>(unknowns));
  for (std::size_t s = 0; s < s_count; ++s) {
    const double gap = gaps.gaps[s];
    contraction(static_cast<Eigen::Index>(s)) = -gap * std::sin(x * gap / 2.0);
    if (with_imaginary) {
      contraction(static_cast<Eigen::Index>(s_count + s)) =
          -gap * std::cos(x * gap / 2.0);
    }
  }

  const PivotedLu lu(system);
  const double condition = lu.condition_number();
  if (lu.singular() || condition > kRejectCondition) {
    std::ostringstream msg;
    msg << "difference system for shifts " << describe(shifts) << " and gaps "
        << describe(gaps.gaps, false) << " at x=" << x << " has condition number "
        << condition;
    throw Error(ErrorCode::SingularSystem, msg.str());
  }
  const RVector row_weights = lu.solve_transposed(contraction);

  ShiftRule rule;
  rule.method = method;
  rule.gaps = gaps;
  rule.condition_number = condition;
  rule.anchor = x;
  rule.terms.resize(shifts.size());
  double ref_weight = 0.0;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const double w = row_weights(static_cast<Eigen::Index>(r));
    rule.terms[rows[r]] = {shifts[rows[r]], w};
    ref_weight -= w;
  }
  rule.terms[ref] = {d_ref, ref_weight};
  return rule;
}

} // namespace

std::string_view to_string(RuleMethod method) noexcept {
  switch (method) {
  case RuleMethod::SymmetricGeneral:
    return "symmetric-general";
  case RuleMethod::ClosedS1:
    return "closed-S1";
  case RuleMethod::TriangulationS1:
    return "triangulation-S1";
  case RuleMethod::ClosedS2:
    return "closed-S2";
  case RuleMethod::ClosedS3:
    return "closed-S3";
  case RuleMethod::TriangulationGeneral:
    return "triangulation-general";
  case RuleMethod::RealSymmetric:
    return "real-symmetric";
  }
  return "unknown";
}

RuleMethod parse_rule_method(std::string_view name) {
  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  for (const auto method :
       {RuleMethod::SymmetricGeneral, RuleMethod::ClosedS1,
        RuleMethod::TriangulationS1, RuleMethod::ClosedS2,
        RuleMethod::ClosedS3, RuleMethod::TriangulationGeneral,
        RuleMethod::RealSymmetric}) {
    std::string candidate(to_string(method));
    std::transform(candidate.begin(), candidate.end(), candidate.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (candidate == lowered) {
      return method;
    }
  }
  throw Error(ErrorCode::ParseError,
              "unknown rule method \"" + std::string(name) + "\"");
}

bool is_point_dependent(RuleMethod method) noexcept {
  return method == RuleMethod::TriangulationGeneral ||
         method == RuleMethod::RealSymmetric;
}

std::vector<double> ShiftRule::shifts() const {
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto &t : terms) {
    out.push_back(t.shift);
  }
  return out;
}

std::vector<double> ShiftRule::weights() const {
  std::vector<double> out;
  out.reserve(terms.size());
  for (const auto &t : terms) {
    out.push_back(t.weight);
  }
  return out;
}

double ShiftRule::weight_sum() const {
  double sum = 0.0;
  for (const auto &t : terms) {
    sum += t.weight;
  }
  return sum;
}

bool ShiftRule::ill_conditioned() const noexcept {
  return condition_number > kWarnCondition;
}

double ShiftRule::contract(std::span<const double> values) const {
  if (values.size() != terms.size()) {
    throw Error(ErrorCode::DimensionMismatch,
                "expected one function value per rule term");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    sum += terms[i].weight * values[i];
  }
  return chain_factor * sum;
}

SineSystem SineSystem::build(std::span<const double> shifts,
                             std::span<const double> gaps) {
  SineSystem out;
  out.shifts.assign(shifts.begin(), shifts.end());
  out.gaps.assign(gaps.begin(), gaps.end());
  out.matrix.resize(static_cast<Eigen::Index>(shifts.size()),
                    static_cast<Eigen::Index>(gaps.size()));
  for (std::size_t l = 0; l < shifts.size(); ++l) {
    for (std::size_t s = 0; s < gaps.size(); ++s) {
      out.matrix(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(s)) =
          4.0 * std::sin(shifts[l] * gaps[s] / 2.0);
    }
  }
  return out;
}

double SineSystem::condition_number() const {
  return PivotedLu(matrix).condition_number();
}

double SineSystem::determinant() const { return PivotedLu(matrix).determinant(); }

std::vector<double> real_symmetric_shifts(const GapSet &gaps) {
  if (gaps.size() == 0) {
    throw Error(ErrorCode::EmptyGapSet, "no gaps given");
  }
  const double s = static_cast<double>(gaps.size());
  const double spacing = 2.0 * kPi * s / ((s + 1.0) * gaps.max());
  std::vector<double> out;
  for (std::size_t l = 0; l <= gaps.size(); ++l) {
    out.push_back(static_cast<double>(l) * spacing);
  }
  return out;
}

std::vector<double> default_shifts(const GapSet &gaps) {
  const std::size_t s_count = gaps.size();
  if (s_count == 0) {
    throw Error(ErrorCode::EmptyGapSet, "no gaps to choose shifts for");
  }
  const double gap_max = gaps.max();
  std::vector<double> shifts(s_count);
  for (std::size_t l = 0; l < s_count; ++l) {
    shifts[l] = static_cast<double>(2 * l + 1) * kPi / (2.0 * gap_max);
  }
  auto max_phase = [&] {
    double m = 0.0;
    for (const double d : shifts) {
      for (const double g : gaps.gaps) {
        m = std::max(m, std::abs(d * g / 2.0));
      }
    }
    return m;
  };
  while (max_phase() >= kPi) {
    for (auto &d : shifts) {
      d /= 2.0;
    }
  }
  for (int attempt = 0; attempt <= kMaxShiftStretches; ++attempt) {
    const double cond = SineSystem::build(shifts, gaps.gaps).condition_number();
    if (cond < kWarnCondition) {
      return shifts;
    }
    *std::max_element(shifts.begin(), shifts.end()) *= 1.05;
  }
  throw Error(ErrorCode::ShiftSelectionFailure,
              "no well-conditioned shifts found for gaps " +
                  describe(gaps.gaps, false));
}

ShiftRule symmetric_rule(const GapSet &gaps, std::span<const double> shifts) {
  if (gaps.size() == 0) {
    throw Error(ErrorCode::EmptyGapSet, "symmetric rule needs at least one gap");
  }
  if (shifts.size() != gaps.size()) {
    throw Error(ErrorCode::InvalidArgument,
                "symmetric rule needs exactly one shift per gap (" +
                    std::to_string(gaps.size()) + "), got " +
                    std::to_string(shifts.size()));
  }
  require_finite(shifts, "shifts");
  const SineSystem system = SineSystem::build(shifts, gaps.gaps);
  const PivotedLu lu(system.matrix);
  const double condition = lu.condition_number();
  if (lu.singular() || condition > kRejectCondition) {
    std::ostringstream msg;
    msg << "sine system for shifts " << describe(shifts) << " and gaps "
        << describe(gaps.gaps, false) << " has condition number " << condition;
    throw Error(ErrorCode::SingularSystem, msg.str());
  }
  // w_l = sum_s gap_s (M^-1)_{s l}, i.e. M^T w = gaps.
  const RVector gap_vec = Eigen::Map<const RVector>(
      gaps.gaps.data(), static_cast<Eigen::Index>(gaps.size()));
  const RVector w = lu.solve_transposed(gap_vec);
  return symmetric_from_weights(RuleMethod::SymmetricGeneral, gaps, shifts,
                                std::span<const double>(w.data(), w.size()),
                                condition);
}

ShiftRule closed_s1(double gap, double shift) {
  const double sine = std::sin(shift * gap / 2.0);
  if (std::abs(sine) < kSineFloor) {
    throw Error(ErrorCode::SingularShift,
                "sin(shift*gap/2) vanishes for shift " +
                    describe(std::span(&shift, 1)));
  }
  const double w = gap / (4.0 * sine);
  return symmetric_from_weights(RuleMethod::ClosedS1,
                                GapSet::from_values({gap}),
                                std::span(&shift, 1), std::span(&w, 1), 1.0);
}

ShiftRule triangulation_s1(double gap, std::span<const double, 3> shifts) {
  const double d1 = shifts[0];
  const double d2 = shifts[1];
  const double d3 = shifts[2];
  const double s12 = std::sin((d2 - d1) * gap / 4.0);
  const double s32 = std::sin((d2 - d3) * gap / 4.0);
  const double s13 = std::sin((d3 - d1) * gap / 4.0);
  if (std::abs(s12) < kSineFloor || std::abs(s32) < kSineFloor ||
      std::abs(s13) < kSineFloor) {
    throw Error(ErrorCode::DegenerateStencil,
                "two shifts coincide modulo 4pi/gap in " + describe(shifts));
  }
  const double c1 = std::cos(d1 * gap / 2.0);
  const double c2 = std::cos(d2 * gap / 2.0);
  const double c3 = std::cos(d3 * gap / 2.0);
  const double scale = gap / (8.0 * s12 * s32 * s13);

  ShiftRule rule;
  rule.method = RuleMethod::TriangulationS1;
  rule.gaps = GapSet::from_values({gap});
  rule.terms = {{d1, scale * (c2 - c3)},
                {d2, scale * (c3 - c1)},
                {d3, scale * (c1 - c2)}};
  return rule;
}

ShiftRule closed_s2(std::span<const double, 2> gaps,
                    std::span<const double, 2> shifts) {
  const double g1 = gaps[0];
  const double g2 = gaps[1];
  const double d1 = shifts[0];
  const double d2 = shifts[1];
  auto sn = [](double d, double g) { return std::sin(d * g / 2.0); };

  const double den = sn(d1, g1) * sn(d2, g2) - sn(d1, g2) * sn(d2, g1);
  if (std::abs(den) < kSineFloor) {
    throw Error(ErrorCode::SingularShiftPair,
                "shift pair " + describe(shifts) + " is singular for gaps " +
                    describe(gaps, false));
  }
  const double alpha1 = (g1 * sn(d2, g2) - g2 * sn(d2, g1)) / (4.0 * den);
  const double alpha2 = (g2 * sn(d1, g1) - g1 * sn(d1, g2)) / (4.0 * den);
  const double weights[2] = {alpha1, alpha2};
  return symmetric_from_weights(RuleMethod::ClosedS2,
                                GapSet::from_values({g1, g2}), shifts, weights,
                                1.0);
}

ShiftRule closed_s3(std::span<const double, 3> gaps,
                    std::span<const double, 3> shifts) {
  const double g1 = gaps[0];
  const double g2 = gaps[1];
  const double g3 = gaps[2];
  const double d1 = shifts[0];
  const double d2 = shifts[1];
  const double d3 = shifts[2];
  auto sn = [](double d, double g) { return std::sin(d * g / 2.0); };

  const double nu1 =
      g3 * (sn(d2, g2) * sn(d3, g1) - sn(d2, g1) * sn(d3, g2)) +
      g2 * (sn(d2, g1) * sn(d3, g3) - sn(d2, g3) * sn(d3, g1)) +
      g1 * (sn(d2, g3) * sn(d3, g2) - sn(d2, g2) * sn(d3, g3));
  const double nu2 =
      g3 * (sn(d1, g1) * sn(d3, g2) - sn(d1, g2) * sn(d3, g1)) +
      g2 * (sn(d1, g3) * sn(d3, g1) - sn(d1, g1) * sn(d3, g3)) +
      g1 * (sn(d1, g2) * sn(d3, g3) - sn(d1, g3) * sn(d3, g2));
  const double nu3 =
      g3 * (sn(d1, g2) * sn(d2, g1) - sn(d1, g1) * sn(d2, g2)) +
      g2 * (sn(d1, g1) * sn(d2, g3) - sn(d1, g3) * sn(d2, g1)) +
      g1 * (sn(d1, g3) * sn(d2, g2) - sn(d1, g2) * sn(d2, g3));
  const double vol = sn(d1, g3) * sn(d2, g2) * sn(d3, g1) -
                     sn(d1, g3) * sn(d2, g1) * sn(d3, g2) +
                     sn(d1, g2) * sn(d2, g1) * sn(d3, g3) -
                     sn(d1, g2) * sn(d2, g3) * sn(d3, g1) +
                     sn(d1, g1) * sn(d2, g3) * sn(d3, g2) -
                     sn(d1, g1) * sn(d2, g2) * sn(d3, g3);
  if (std::abs(vol) < kSineFloor) {
    throw Error(ErrorCode::SingularStencil,
                "shift triple " + describe(shifts) + " is singular for gaps " +
                    describe(gaps, false));
  }
  const double weights[3] = {nu1 / (4.0 * vol), nu2 / (4.0 * vol),
                             nu3 / (4.0 * vol)};
  return symmetric_from_weights(RuleMethod::ClosedS3,
                                GapSet::from_values({g1, g2, g3}), shifts,
                                weights, 1.0);
}

ShiftRule triangulation_general(const GapSet &gaps,
                                std::span<const double> shifts, double x) {
  const std::size_t needed = 2 * gaps.size() + 1;
  if (shifts.size() < needed) {
    throw Error(ErrorCode::InsufficientStencils,
                "distinct-shift rule for " + std::to_string(gaps.size()) +
                    " gaps needs " + std::to_string(needed) +
                    " stencils, got " + std::to_string(shifts.size()));
  }
  if (shifts.size() > needed) {
    throw Error(ErrorCode::InvalidArgument,
                "distinct-shift rule takes exactly " + std::to_string(needed) +
                    " stencils");
  }
  require_finite(shifts, "shifts");
  require_distinct(shifts);
  return solve_difference_system(RuleMethod::TriangulationGeneral, gaps,
                                 shifts, x, true);
}

ShiftRule real_symmetric_rule(const GapSet &gaps,
                              std::span<const double> shifts, double x) {
  const std::size_t needed = gaps.size() + 1;
  if (shifts.size() < needed) {
    throw Error(ErrorCode::InsufficientStencils,
                "real-symmetric rule for " + std::to_string(gaps.size()) +
                    " gaps needs " + std::to_string(needed) + " stencils");
  }
  if (shifts.size() > needed) {
    throw Error(ErrorCode::InvalidArgument,
                "real-symmetric rule takes exactly " + std::to_string(needed) +
                    " stencils");
  }
  require_finite(shifts, "shifts");
  require_distinct(shifts);
  return solve_difference_system(RuleMethod::RealSymmetric, gaps, shifts, x,
                                 false);
}

ShiftRule rule_at(const ShiftRule &rule, double x) {
  if (!is_point_dependent(rule.method) || (rule.anchor && *rule.anchor == x)) {
    return rule;
  }
  const auto shifts = rule.shifts();
  ShiftRule rebuilt = rule.method == RuleMethod::TriangulationGeneral
                          ? triangulation_general(rule.gaps, shifts, x)
                          : real_symmetric_rule(rule.gaps, shifts, x);
  rebuilt.chain_factor = rule.chain_factor;
  return rebuilt;
}

ShiftRule apply_chain(const ShiftRule &rule, double dphi_dx) {
  if (!std::isfinite(dphi_dx)) {
    throw Error(ErrorCode::InvalidArgument, "dphi/dx must be finite");
  }
  ShiftRule out = rule;
  out.chain_factor *= dphi_dx;
  return out;
}

} // namespace gradshift
