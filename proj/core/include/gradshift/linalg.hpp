#pragma once

#include <vector>

#include "gradshift/types.hpp"

namespace gradshift {

/// Rule systems above this 1-norm condition number are rejected.
inline constexpr double kRejectCondition = 1e8;
/// Rule systems above this condition number are flagged as ill conditioned.
inline constexpr double kWarnCondition = 1e6;

/// LU factorisation with partial pivoting for the small dense systems that
/// define shift rules. A zero pivot marks the matrix singular rather than
/// throwing; callers decide how to report it.
class PivotedLu {
public:
  explicit PivotedLu(const RMatrix &matrix);

  bool singular() const noexcept { return singular_; }
  double determinant() const noexcept;

  RVector solve(const RVector &rhs) const;
  /// Solves A^T x = rhs.
  RVector solve_transposed(const RVector &rhs) const;

  /// Exact 1-norm condition number ||A||_1 ||A^-1||_1; +inf when singular.
  double condition_number() const;

private:
  RMatrix lu_;
  std::vector<Eigen::Index> perm_;
  double norm1_ = 0.0;
  int swaps_ = 0;
  bool singular_ = false;
};

} // namespace gradshift
