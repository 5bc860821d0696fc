#include "gradshift/linalg.hpp"

#include <cmath>
#include <limits>
#include <numeric>

namespace gradshift {

PivotedLu::PivotedLu(const RMatrix &matrix) : lu_(matrix) {
  const Eigen::Index n = lu_.rows();
  perm_.resize(static_cast<std::size_t>(n));
  std::iota(perm_.begin(), perm_.end(), Eigen::Index{0});
  norm1_ = n > 0 ? lu_.cwiseAbs().colwise().sum().maxCoeff() : 0.0;

  const double tiny = std::numeric_limits<double>::epsilon() * norm1_;
  for (Eigen::Index k = 0; k < n; ++k) {
    Eigen::Index pivot = k;
    for (Eigen::Index i = k + 1; i < n; ++i) {
      if (std::abs(lu_(i, k)) > std::abs(lu_(pivot, k))) {
        pivot = i;
      }
    }
    if (std::abs(lu_(pivot, k)) <= tiny) {
      singular_ = true;
      return;
    }
    if (pivot != k) {
      lu_.row(k).swap(lu_.row(pivot));
      std::swap(perm_[static_cast<std::size_t>(k)],
                perm_[static_cast<std::size_t>(pivot)]);
      ++swaps_;
    }
    for (Eigen::Index i = k + 1; i < n; ++i) {
      lu_(i, k) /= lu_(k, k);
      for (Eigen::Index j = k + 1; j < n; ++j) {
        lu_(i, j) -= lu_(i, k) * lu_(k, j);
      }
    }
  }
}

double PivotedLu::determinant() const noexcept {
  if (singular_) {
    return 0.0;
  }
  double det = swaps_ % 2 == 0 ? 1.0 : -1.0;
  for (Eigen::Index k = 0; k < lu_.rows(); ++k) {
    det *= lu_(k, k);
  }
  return det;
}

RVector PivotedLu::solve(const RVector &rhs) const {
  const Eigen::Index n = lu_.rows();
  RVector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = rhs(perm_[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < i; ++j) {
      s -= lu_(i, j) * y(j);
    }
    y(i) = s;
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = y(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      s -= lu_(i, j) * y(j);
    }
    y(i) = s / lu_(i, i);
  }
  return y;
}

RVector PivotedLu::solve_transposed(const RVector &rhs) const {
  // P A = L U  =>  A^T = U^T L^T P.
  const Eigen::Index n = lu_.rows();
  RVector z(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double s = rhs(i);
    for (Eigen::Index j = 0; j < i; ++j) {
      s -= lu_(j, i) * z(j);
    }
    z(i) = s / lu_(i, i);
  }
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double s = z(i);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      s -= lu_(j, i) * z(j);
    }
    z(i) = s;
  }
  RVector x(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    x(perm_[static_cast<std::size_t>(i)]) = z(i);
  }
  return x;
}

double PivotedLu::condition_number() const {
  if (singular_) {
    return std::numeric_limits<double>::infinity();
  }
  const Eigen::Index n = lu_.rows();
  double inv_norm1 = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    const RVector col = solve(RVector::Unit(n, j));
    inv_norm1 = std::max(inv_norm1, col.cwiseAbs().sum());
  }
  return norm1_ * inv_norm1;
}

} // namespace gradshift
