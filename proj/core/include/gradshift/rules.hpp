#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "gradshift/spectral.hpp"
#include "gradshift/types.hpp"

namespace gradshift {

enum class RuleMethod {
  SymmetricGeneral,
  ClosedS1,
  TriangulationS1,
  ClosedS2,
  ClosedS3,
  TriangulationGeneral,
  RealSymmetric,
};

std::string_view to_string(RuleMethod method) noexcept;
/// Accepts the names produced by to_string, case-insensitively.
RuleMethod parse_rule_method(std::string_view name);

/// Methods whose weights depend on the evaluation point and must be re-solved
/// when the point moves.
bool is_point_dependent(RuleMethod method) noexcept;

struct ShiftTerm {
  double shift = 0.0;
  double weight = 0.0;
};

/// df/dx = chain_factor * sum_i weight_i * f(x + shift_i).
///
/// Weights are stored without the chain factor so that one rule can be reused
/// across encodings with different dphi/dx.
struct ShiftRule {
  std::vector<ShiftTerm> terms;
  RuleMethod method = RuleMethod::SymmetricGeneral;
  GapSet gaps;
  double condition_number = 1.0;
  double chain_factor = 1.0;
  /// Evaluation point the weights were solved for (point-dependent methods).
  std::optional<double> anchor;

  std::vector<double> shifts() const;
  std::vector<double> weights() const;
  double weight_sum() const;
  bool ill_conditioned() const noexcept;

  /// chain_factor * sum_i weight_i * values[i].
  double contract(std::span<const double> values) const;
};

/// M[l][s] = 4 sin(shift_l * gap_s / 2).
struct SineSystem {
  RMatrix matrix;
  std::vector<double> shifts;
  std::vector<double> gaps;

  static SineSystem build(std::span<const double> shifts,
                          std::span<const double> gaps);
  double condition_number() const;
  double determinant() const;
};

/// S shifts for the symmetric system: (2l-1) pi / (2 max gap), halved until
/// every phase shift*gap/2 is below pi, then the largest shift is stretched
/// by 5% at a time until the system condition number drops below 1e6.
/// Throws Error{ShiftSelectionFailure} after 20 stretches.
std::vector<double> default_shifts(const GapSet &gaps);

/// S+1 equally spaced shifts l * 2 pi S / ((S+1) max gap), l = 0..S, for
/// real_symmetric_rule. For the equally spaced gaps of a product feature map
/// these spread the evaluation points evenly over one period.
std::vector<double> real_symmetric_shifts(const GapSet &gaps);

/// General symmetric-shift rule from the sine system; 2S terms.
/// Throws Error{SingularSystem} when the condition number exceeds 1e8.
ShiftRule symmetric_rule(const GapSet &gaps, std::span<const double> shifts);

/// Single-gap rule: weights +-gap / (4 sin(shift*gap/2)).
ShiftRule closed_s1(double gap, double shift);

/// Three distinct shifts, single gap. x-independent.
ShiftRule triangulation_s1(double gap, std::span<const double, 3> shifts);

/// Four-term rule valid for any generator with two unique gaps.
ShiftRule closed_s2(std::span<const double, 2> gaps,
                    std::span<const double, 2> shifts);

/// Six-term rule for three unique gaps.
ShiftRule closed_s3(std::span<const double, 3> gaps,
                    std::span<const double, 3> shifts);

/// Distinct-shift rule from 2S+1 evaluations solved for the real and
/// imaginary parts of the projected matrix elements at point `x`. The
/// reference stencil is the zero shift if present, otherwise the first.
ShiftRule triangulation_general(const GapSet &gaps,
                                std::span<const double> shifts, double x = 0.0);

/// S+1 evaluation rule for circuits whose projected matrix elements are real
/// (real-amplitude state, real cost, real generator eigenbasis). Built at `x`.
ShiftRule real_symmetric_rule(const GapSet &gaps,
                              std::span<const double> shifts, double x = 0.0);

/// Re-solves a point-dependent rule at `x` with its original stencil.
/// Point-independent rules are returned unchanged.
ShiftRule rule_at(const ShiftRule &rule, double x);

ShiftRule apply_chain(const ShiftRule &rule, double dphi_dx);

} // namespace gradshift
