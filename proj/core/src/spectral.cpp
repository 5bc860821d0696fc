#include "gradshift/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "gradshift/error.hpp"

namespace gradshift {
namespace {

constexpr double kHermiticityTolerance = 1e-12;

void check_hermitian(const CMatrix &m) {
  if (m.rows() != m.cols() || m.rows() < 1) {
    throw Error(ErrorCode::DimensionMismatch,
                "operator must be a non-empty square matrix");
  }
  const double scale = m.cwiseAbs().maxCoeff();
  const double limit = kHermiticityTolerance * scale;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      const double asym = std::abs(m(i, j) - std::conj(m(j, i)));
      if (asym > limit) {
        std::ostringstream msg;
        msg << "entry (" << i << "," << j << ") differs from the conjugate of ("
            << j << "," << i << ") by " << asym;
        throw Error(ErrorCode::NonHermitianInput, msg.str());
      }
    }
  }
}

CMatrix pauli_sum_matrix(const std::vector<PauliTerm> &terms) {
  if (terms.empty()) {
    throw Error(ErrorCode::InvalidArgument, "empty Pauli sum");
  }
  const std::size_t width = terms.front().string.size();
  CMatrix acc = CMatrix::Zero(1LL << width, 1LL << width);
  for (const auto &term : terms) {
    if (term.string.size() != width) {
      throw Error(ErrorCode::DimensionMismatch,
                  "Pauli strings in a sum must have equal length");
    }
    acc += term.coeff * pauli_matrix(term.string);
  }
  return acc;
}

double off_diagonal_norm(const CMatrix &a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) {
        sum += std::norm(a(i, j));
      }
    }
  }
  return std::sqrt(sum);
}

// Zeroes a(p,q) with R = D * Q where D = diag(1, e^{-i phi}) makes the
// pivot real and Q is the real Jacobi rotation of the resulting block.
void rotate(CMatrix &a, CMatrix &v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double mag = std::abs(apq);
  const Complex phase = apq / mag;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();

  const double tau = (aqq - app) / (2.0 * mag);
  const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                   (std::abs(tau) + std::sqrt(1.0 + tau * tau));
  const double c = 1.0 / std::sqrt(1.0 + t * t);
  const double s = t * c;

  const Complex rpp = c;
  const Complex rpq = s;
  const Complex rqp = -s * std::conj(phase);
  const Complex rqq = c * std::conj(phase);

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex akp = a(k, p);
    const Complex akq = a(k, q);
    a(k, p) = akp * rpp + akq * rqp;
    a(k, q) = akp * rpq + akq * rqq;
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex apk = a(p, k);
    const Complex aqk = a(q, k);
    a(p, k) = std::conj(rpp) * apk + std::conj(rqp) * aqk;
    a(q, k) = std::conj(rpq) * apk + std::conj(rqq) * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();

  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex vkp = v(k, p);
    const Complex vkq = v(k, q);
    v(k, p) = vkp * rpp + vkq * rqp;
    v(k, q) = vkp * rpq + vkq * rqq;
  }
}

} // namespace

CMatrix pauli_matrix(std::string_view spec) {
  if (spec.empty()) {
    throw Error(ErrorCode::InvalidPauliCharacter, "empty Pauli string");
  }
  const Complex i{0.0, 1.0};
  CMatrix result = CMatrix::Identity(1, 1);
  for (const char ch : spec) {
    Eigen::Matrix2cd factor;
    switch (ch) {
    case 'I':
      factor << 1, 0, 0, 1;
      break;
    case 'X':
      factor << 0, 1, 1, 0;
      break;
    case 'Y':
      factor << 0, -i, i, 0;
      break;
    case 'Z':
      factor << 1, 0, 0, -1;
      break;
    default:
      throw Error(ErrorCode::InvalidPauliCharacter,
                  std::string("unexpected character '") + ch +
                      "' in Pauli string \"" + std::string(spec) + "\"");
    }
    // Leftmost factor is the most significant index.
    CMatrix next(result.rows() * 2, result.cols() * 2);
    for (Eigen::Index r = 0; r < result.rows(); ++r) {
      for (Eigen::Index c = 0; c < result.cols(); ++c) {
        next.block<2, 2>(2 * r, 2 * c) = result(r, c) * factor;
      }
    }
    result = std::move(next);
  }
  return result;
}

HermitianOperator::HermitianOperator(CMatrix entries)
    : entries_(std::move(entries)) {
  check_hermitian(entries_);
}

HermitianOperator::HermitianOperator(CMatrix entries,
                                     std::vector<PauliTerm> terms)
    : entries_(std::move(entries)), pauli_terms_(std::move(terms)) {
  check_hermitian(entries_);
}

HermitianOperator HermitianOperator::from_paulis(std::vector<PauliTerm> terms) {
  CMatrix dense = pauli_sum_matrix(terms);
  return HermitianOperator(std::move(dense), std::move(terms));
}

HermitianOperator HermitianOperator::identity(int dim) {
  return HermitianOperator(CMatrix::Identity(dim, dim));
}

HermitianOperator HermitianOperator::scaled(double factor) const {
  if (pauli_terms_) {
    auto terms = *pauli_terms_;
    for (auto &t : terms) {
      t.coeff *= factor;
    }
    return HermitianOperator(entries_ * factor, std::move(terms));
  }
  return HermitianOperator(entries_ * factor);
}

HermitianOperator HermitianOperator::shifted(double constant) const {
  CMatrix m = entries_;
  m.diagonal().array() += constant;
  if (pauli_terms_ && !pauli_terms_->empty()) {
    auto terms = *pauli_terms_;
    terms.push_back({constant, std::string(terms.front().string.size(), 'I')});
    return HermitianOperator(std::move(m), std::move(terms));
  }
  return HermitianOperator(std::move(m));
}

HermitianOperator operator+(const HermitianOperator &a,
                            const HermitianOperator &b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "cannot add operators of different dimension");
  }
  if (a.pauli_terms_ && b.pauli_terms_) {
    auto terms = *a.pauli_terms_;
    terms.insert(terms.end(), b.pauli_terms_->begin(), b.pauli_terms_->end());
    return HermitianOperator(a.entries_ + b.entries_, std::move(terms));
  }
  return HermitianOperator(a.entries_ + b.entries_);
}

double Spectrum::spread() const {
  if (eigenvalues.size() == 0) {
    return 0.0;
  }
  return eigenvalues(0) - eigenvalues(eigenvalues.size() - 1);
}

GapSet GapSet::from_values(std::vector<double> values, double tolerance) {
  if (values.empty()) {
    throw Error(ErrorCode::EmptyGapSet, "no gaps given");
  }
  std::sort(values.begin(), values.end());
  GapSet out;
  for (const double g : values) {
    if (!std::isfinite(g) || g <= tolerance) {
      throw Error(ErrorCode::InvalidArgument,
                  "gaps must be finite and strictly positive");
    }
    if (!out.gaps.empty() && g - out.gaps.back() <= tolerance) {
      ++out.multiplicities.back();
      continue;
    }
    out.gaps.push_back(g);
    out.multiplicities.push_back(1);
  }
  return out;
}

Spectrum diagonalize(const HermitianOperator &op,
                     const EigensolverOptions &options) {
  CMatrix a = op.matrix();
  const Eigen::Index n = a.rows();
  CMatrix v = CMatrix::Identity(n, n);

  const double target = options.relative_tolerance * a.norm();
  int sweep = 0;
  while (off_diagonal_norm(a) > target) {
    if (++sweep > options.max_sweeps) {
      throw Error(ErrorCode::ConvergenceFailure,
                  "Jacobi sweeps exceeded " +
                      std::to_string(options.max_sweeps));
    }
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (std::abs(a(p, q)) == 0.0) {
          continue;
        }
        rotate(a, v, p, q);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto lhs, auto rhs) {
    return a(lhs, lhs).real() > a(rhs, rhs).real();
  });

  Spectrum out;
  out.eigenvalues.resize(n);
  out.eigenvectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto src = order[static_cast<std::size_t>(k)];
    out.eigenvalues(k) = a(src, src).real();
    out.eigenvectors.col(k) = v.col(src);
  }
  return out;
}

double default_gap_tolerance(const Spectrum &spectrum) {
  return 1e-9 * std::max(1.0, spectrum.spread());
}

GapSet unique_gaps(const Spectrum &spectrum, double gap_tolerance) {
  if (!(gap_tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "gap tolerance must be positive");
  }
  // Collapse degenerate eigenvalues into levels first so that multiplicities
  // count pairs of distinct levels.
  const auto &lambda = spectrum.eigenvalues;
  std::vector<double> levels;
  std::vector<int> level_sizes;
  for (Eigen::Index j = 0; j < lambda.size(); ++j) {
    if (!levels.empty() &&
        levels.back() / level_sizes.back() - lambda(j) <= gap_tolerance) {
      levels.back() += lambda(j);
      ++level_sizes.back();
    } else {
      levels.push_back(lambda(j));
      level_sizes.push_back(1);
    }
  }
  for (std::size_t k = 0; k < levels.size(); ++k) {
    levels[k] /= level_sizes[k];
  }

  std::vector<double> diffs;
  for (std::size_t j = 0; j < levels.size(); ++j) {
    for (std::size_t k = j + 1; k < levels.size(); ++k) {
      diffs.push_back(levels[j] - levels[k]);
    }
  }
  if (diffs.empty()) {
    throw Error(ErrorCode::EmptyGapSet,
                "all eigenvalues are degenerate; the derivative is zero");
  }
  std::sort(diffs.begin(), diffs.end());

  GapSet out;
  out.source_dim = spectrum.dim();
  double cluster_sum = diffs.front();
  int cluster_count = 1;
  double previous = diffs.front();
  auto flush = [&] {
    out.gaps.push_back(cluster_sum / cluster_count);
    out.multiplicities.push_back(cluster_count);
  };
  for (std::size_t i = 1; i < diffs.size(); ++i) {
    if (diffs[i] - previous <= gap_tolerance) {
      cluster_sum += diffs[i];
      ++cluster_count;
    } else {
      flush();
      cluster_sum = diffs[i];
      cluster_count = 1;
    }
    previous = diffs[i];
  }
  flush();
  return out;
}

GapSet unique_gaps(const Spectrum &spectrum) {
  return unique_gaps(spectrum, default_gap_tolerance(spectrum));
}

} // namespace gradshift
