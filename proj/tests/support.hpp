#pragma once

// Independent reference implementations used as test oracles. None of these
// share code paths with the library: eigen-decompositions come from Eigen's
// SelfAdjointEigenSolver and linear solves from FullPivLU.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gradshift/sim.hpp"
#include "gradshift/types.hpp"

namespace oracle {

using gradshift::CMatrix;
using gradshift::Complex;
using gradshift::CVector;
using gradshift::RMatrix;
using gradshift::RVector;

inline CMatrix expm_hermitian(const CMatrix &g, double x) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(g);
  CVector phases(g.rows());
  for (Eigen::Index k = 0; k < g.rows(); ++k) {
    phases(k) = std::polar(1.0, -x * es.eigenvalues()(k) / 2.0);
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// f(x) by explicit matrix products.
inline double chain_value(const gradshift::Circuit &c, double x) {
  const auto &s = c.spec();
  const CVector psi = s.post * expm_hermitian(s.generator.matrix(), x) * s.pre *
                      s.initial_state.amplitudes();
  return (psi.adjoint() * s.cost.matrix() * psi)(0, 0).real();
}

/// Fourth-order Richardson extrapolation of the central difference.
inline double richardson(const gradshift::Circuit &c, double x, double h = 1e-3) {
  auto central = [&](double step) {
    return (chain_value(c, x + step) - chain_value(c, x - step)) / (2 * step);
  };
  return (4 * central(h / 2) - central(h)) / 3;
}

inline RVector sorted_eigenvalues_desc(const CMatrix &m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(m, Eigen::EigenvaluesOnly);
  RVector ev = es.eigenvalues().reverse();
  return ev;
}

/// Weights of the symmetric rule solved with FullPivLU: M^T w = gaps.
inline std::vector<double> sine_weights(const std::vector<double> &gaps,
                                        const std::vector<double> &shifts) {
  const auto n = static_cast<Eigen::Index>(gaps.size());
  RMatrix m(n, n);
  RVector rhs(n);
  for (Eigen::Index l = 0; l < n; ++l) {
    rhs(l) = gaps[static_cast<std::size_t>(l)];
    for (Eigen::Index s = 0; s < n; ++s) {
      m(l, s) = 4 * std::sin(shifts[static_cast<std::size_t>(l)] *
                             gaps[static_cast<std::size_t>(s)] / 2);
    }
  }
  const RVector w = Eigen::FullPivLU<RMatrix>(m.transpose()).solve(rhs);
  return {w.data(), w.data() + n};
}

inline double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace oracle
