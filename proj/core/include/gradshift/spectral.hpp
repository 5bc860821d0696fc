#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gradshift/types.hpp"

namespace gradshift {

/// One term of a Pauli-sum operator, e.g. {0.5, "XZ"}. Qubit 1 is the
/// leftmost character and the most significant basis index.
struct PauliTerm {
  double coeff = 1.0;
  std::string string;
};

/// Dense Kronecker product for a Pauli string over {I,X,Y,Z}.
/// Throws Error{InvalidPauliCharacter} on any other character.
CMatrix pauli_matrix(std::string_view spec);

/// Hermitian generator or cost operator. Always carries the dense matrix;
/// Pauli-sum inputs keep their terms for round-tripping.
class HermitianOperator {
public:
  /// Validates conjugate-transpose symmetry to 1e-12 * max|entries|.
  explicit HermitianOperator(CMatrix entries);

  static HermitianOperator from_paulis(std::vector<PauliTerm> terms);
  static HermitianOperator identity(int dim);

  int dim() const noexcept { return static_cast<int>(entries_.rows()); }
  const CMatrix &matrix() const noexcept { return entries_; }
  const std::optional<std::vector<PauliTerm>> &pauli_terms() const noexcept {
    return pauli_terms_;
  }

  HermitianOperator scaled(double factor) const;
  HermitianOperator shifted(double constant) const;

  friend HermitianOperator operator+(const HermitianOperator &a,
                                     const HermitianOperator &b);

private:
  HermitianOperator(CMatrix entries, std::vector<PauliTerm> terms);

  CMatrix entries_;
  std::optional<std::vector<PauliTerm>> pauli_terms_;
};

/// Eigenvalues sorted non-increasing; eigenvectors are the matching columns.
struct Spectrum {
  RVector eigenvalues;
  CMatrix eigenvectors;

  int dim() const noexcept { return static_cast<int>(eigenvalues.size()); }
  double spread() const;
};

/// Unique positive spectral gaps, ascending. multiplicities[s] counts the
/// eigenvalue pairs (j < j') that were merged into gaps[s].
struct GapSet {
  std::vector<double> gaps;
  std::vector<int> multiplicities;
  int source_dim = 0;

  std::size_t size() const noexcept { return gaps.size(); }
  double max() const { return gaps.back(); }

  /// Builds a gap set from user-supplied values (sorted, deduplicated within
  /// `tolerance`). source_dim is 0 because no spectrum is behind it.
  static GapSet from_values(std::vector<double> values,
                            double tolerance = 1e-9);
};

struct EigensolverOptions {
  int max_sweeps = 100;
  double relative_tolerance = 1e-12;
};

/// Cyclic complex Jacobi eigensolver.
/// Throws Error{ConvergenceFailure} once max_sweeps is exceeded.
Spectrum diagonalize(const HermitianOperator &op,
                     const EigensolverOptions &options = {});

double default_gap_tolerance(const Spectrum &spectrum);

/// Throws Error{EmptyGapSet} when every eigenvalue is degenerate, which means
/// the derivative through this generator is identically zero.
GapSet unique_gaps(const Spectrum &spectrum, double gap_tolerance);
GapSet unique_gaps(const Spectrum &spectrum);

} // namespace gradshift
