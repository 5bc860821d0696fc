#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gradshift/rules.hpp"
#include "gradshift/spectral.hpp"
#include "gradshift/types.hpp"

namespace gradshift {

/// Normalised pure state.
class StateVector {
public:
  /// Throws Error{InvalidArgument} unless ||amplitudes|| = 1 within 1e-10.
  explicit StateVector(CVector amplitudes);

  static StateVector basis(int dim, int index = 0);

  int dim() const noexcept { return static_cast<int>(amplitudes_.size()); }
  const CVector &amplitudes() const noexcept { return amplitudes_; }

private:
  CVector amplitudes_;
};

/// f(x) = <psi0| V^dag U(x)^dag W^dag C W U(x) V |psi0>, U(x) = exp(-i x G/2).
struct CircuitSpec {
  StateVector initial_state = StateVector::basis(1);
  CMatrix pre;
  HermitianOperator generator = HermitianOperator::identity(1);
  CMatrix post;
  HermitianOperator cost = HermitianOperator::identity(1);
  double dphi_dx = 1.0;

  int dim() const noexcept { return generator.dim(); }
};

/// Validated circuit with the generator and cost spectra cached.
class Circuit {
public:
  /// Throws Error{DimensionMismatch} for inconsistent dimensions and
  /// Error{InvalidArgument} for non-unitary pre/post circuits.
  explicit Circuit(CircuitSpec spec);

  const CircuitSpec &spec() const noexcept { return spec_; }
  int dim() const noexcept { return spec_.dim(); }
  const Spectrum &generator_spectrum() const noexcept { return generator_; }
  const Spectrum &cost_spectrum() const noexcept { return cost_; }
  /// EmptyGapSet propagates for constant generators.
  GapSet generator_gaps() const;

  /// V |psi0>.
  const CVector &prepared_state() const noexcept { return prepared_; }
  /// U(x) V |psi0>.
  CVector evolved_state(double x) const;
  /// W U(x) V |psi0>, the state that is measured against C.
  CVector output_state(double x) const;

private:
  CircuitSpec spec_;
  Spectrum generator_;
  Spectrum cost_;
  CVector prepared_;
};

/// exp(-i x G / 2) from the eigendecomposition of G.
CMatrix generator_unitary(const Spectrum &spectrum, double x);
CMatrix generator_unitary(const HermitianOperator &generator, double x);

double expectation(const Circuit &circuit, double x);

/// (i/2) <psi| e^{ixG/2} [G, W^dag C W] e^{-ixG/2} |psi> * dphi_dx.
double exact_derivative(const Circuit &circuit, double x);

/// Central difference (f(x+h) - f(x-h)) / 2h. No chain factor.
double fd_derivative(const Circuit &circuit, double x, double h);

/// rule.chain_factor * sum_i w_i f(x + shift_i). Point-dependent rules are
/// re-solved at x. Exact only if every generator gap is in rule.gaps; see
/// gap_mismatch.
double evaluate_rule(const Circuit &circuit, double x, const ShiftRule &rule);

/// Generator gaps with no counterpart in rule.gaps (empty when compatible).
std::vector<double> gap_mismatch(const Circuit &circuit, const ShiftRule &rule);

// Seeded random objects for tests, benchmarks and the verify suite.

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal folded into Q.
CMatrix random_unitary(int dim, std::mt19937_64 &rng);
/// Haar-distributed rotation in SO(dim).
CMatrix random_orthogonal(int dim, std::mt19937_64 &rng);
StateVector random_state(int dim, std::mt19937_64 &rng);
/// A + A^dag with complex Gaussian A.
HermitianOperator random_hermitian(int dim, std::mt19937_64 &rng);
/// Real symmetric A + A^T with Gaussian A.
HermitianOperator random_real_symmetric(int dim, std::mt19937_64 &rng);

/// Circuit with Haar-random V and W around `generator`, cost `cost`.
Circuit random_circuit(const HermitianOperator &generator,
                       const HermitianOperator &cost, std::mt19937_64 &rng);

} // namespace gradshift
