#include "gradshift/sim.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "gradshift/error.hpp"

namespace gradshift {
namespace {

constexpr double kNormTolerance = 1e-10;
constexpr double kUnitaryTolerance = 1e-10;
constexpr double kImaginaryResidue = 1e-10;

void check_unitary(const CMatrix &u, const char *name, int dim) {
  if (u.rows() != dim || u.cols() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(name) + " is " + std::to_string(u.rows()) + "x" +
                    std::to_string(u.cols()) + ", expected " +
                    std::to_string(dim) + "x" + std::to_string(dim));
  }
  const double err =
      (u.adjoint() * u - CMatrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (err > kUnitaryTolerance) {
    std::ostringstream msg;
    msg << name << " is not unitary (max |U^dag U - I| = " << err << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

double real_part_checked(Complex value, double scale, const char *what) {
  if (std::abs(value.imag()) > kImaginaryResidue * std::max(1.0, scale)) {
    std::ostringstream msg;
    msg << what << " has imaginary residue " << value.imag();
    throw Error(ErrorCode::InternalConsistency, msg.str());
  }
  return value.real();
}

CMatrix ginibre(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CMatrix m(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      m(i, j) = Complex(re, im);
    }
  }
  return m;
}

} // namespace

StateVector::StateVector(CVector amplitudes)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() < 1) {
    throw Error(ErrorCode::InvalidArgument, "state vector is empty");
  }
  const double norm = amplitudes_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    std::ostringstream msg;
    msg << "state vector norm is " << norm << ", expected 1";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

StateVector StateVector::basis(int dim, int index) {
  if (dim < 1 || index < 0 || index >= dim) {
    throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  }
  CVector v = CVector::Zero(dim);
  v(index) = 1.0;
  return StateVector(std::move(v));
}

Circuit::Circuit(CircuitSpec spec) : spec_(std::move(spec)) {
  const int d = spec_.generator.dim();
  if (spec_.cost.dim() != d || spec_.initial_state.dim() != d) {
    throw Error(ErrorCode::DimensionMismatch,
                "generator, cost and initial state dimensions differ");
  }
  if (spec_.pre.size() == 0) {
    spec_.pre = CMatrix::Identity(d, d);
  }
  if (spec_.post.size() == 0) {
    spec_.post = CMatrix::Identity(d, d);
  }
  check_unitary(spec_.pre, "pre circuit", d);
  check_unitary(spec_.post, "post circuit", d);
  if (!std::isfinite(spec_.dphi_dx)) {
    throw Error(ErrorCode::InvalidArgument, "dphi_dx must be finite");
  }
  generator_ = diagonalize(spec_.generator);
  cost_ = diagonalize(spec_.cost);
  prepared_ = spec_.pre * spec_.initial_state.amplitudes();
}

GapSet Circuit::generator_gaps() const { return unique_gaps(generator_); }

CVector Circuit::evolved_state(double x) const {
  const auto &q = generator_.eigenvectors;
  CVector coeffs = q.adjoint() * prepared_;
  for (Eigen::Index k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -x * generator_.eigenvalues(k) / 2.0);
  }
  return q * coeffs;
}

CVector Circuit::output_state(double x) const {
  return spec_.post * evolved_state(x);
}

CMatrix generator_unitary(const Spectrum &spectrum, double x) {
  const auto &q = spectrum.eigenvectors;
  CVector phases(spectrum.dim());
  for (int k = 0; k < spectrum.dim(); ++k) {
    phases(k) = std::polar(1.0, -x * spectrum.eigenvalues(k) / 2.0);
  }
  return q * phases.asDiagonal() * q.adjoint();
}

CMatrix generator_unitary(const HermitianOperator &generator, double x) {
  return generator_unitary(diagonalize(generator), x);
}

double expectation(const Circuit &circuit, double x) {
  const CVector out = circuit.output_state(x);
  const Complex value = out.dot(circuit.spec().cost.matrix() * out);
  const double scale = circuit.spec().cost.matrix().cwiseAbs().maxCoeff();
  return real_part_checked(value, scale, "expectation value");
}

double exact_derivative(const Circuit &circuit, double x) {
  const auto &spec = circuit.spec();
  const CVector phi = circuit.evolved_state(x);
  const CVector dressed =
      spec.post.adjoint() * (spec.cost.matrix() * (spec.post * phi));
  const CVector generated = spec.generator.matrix() * phi;
  // <phi|G C_d|phi> - <phi|C_d G|phi>
  const Complex commutator = generated.dot(dressed) - dressed.dot(generated);
  const Complex value = Complex(0.0, 0.5) * commutator;
  const double scale = spec.cost.matrix().cwiseAbs().maxCoeff() *
                       spec.generator.matrix().cwiseAbs().maxCoeff();
  return real_part_checked(value, scale, "commutator derivative") *
         spec.dphi_dx;
}

double fd_derivative(const Circuit &circuit, double x, double h) {
  if (!(h > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "step must be positive");
  }
  return (expectation(circuit, x + h) - expectation(circuit, x - h)) /
         (2.0 * h);
}

double evaluate_rule(const Circuit &circuit, double x, const ShiftRule &rule) {
  const ShiftRule local = rule_at(rule, x);
  std::vector<double> values;
  values.reserve(local.terms.size());
  for (const auto &term : local.terms) {
    values.push_back(expectation(circuit, x + term.shift));
  }
  return local.contract(values);
}

std::vector<double> gap_mismatch(const Circuit &circuit,
                                 const ShiftRule &rule) {
  std::vector<double> missing;
  GapSet gaps;
  try {
    gaps = circuit.generator_gaps();
  } catch (const Error &e) {
    if (e.code() == ErrorCode::EmptyGapSet) {
      return missing;
    }
    throw;
  }
  for (const double g : gaps.gaps) {
    const double tol = 1e-9 * std::max(1.0, g);
    const bool found =
        std::any_of(rule.gaps.gaps.begin(), rule.gaps.gaps.end(),
                    [&](double r) { return std::abs(r - g) <= tol; });
    if (!found) {
      missing.push_back(g);
    }
  }
  return missing;
}

CMatrix random_unitary(int dim, std::mt19937_64 &rng) {
  const CMatrix z = ginibre(dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ() * CMatrix::Identity(dim, dim);
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    const Complex diag = r(k, k);
    const double mag = std::abs(diag);
    q.col(k) *= mag > 0.0 ? diag / mag : Complex(1.0);
  }
  return q;
}

CMatrix random_orthogonal(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RMatrix z(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      z(i, j) = normal(rng);
    }
  }
  Eigen::HouseholderQR<RMatrix> qr(z);
  RMatrix q = qr.householderQ() * RMatrix::Identity(dim, dim);
  const RMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < dim; ++k) {
    if (r(k, k) < 0.0) {
      q.col(k) *= -1.0;
    }
  }
  if (q.determinant() < 0.0) {
    q.col(0) *= -1.0;
  }
  return q.cast<Complex>();
}

StateVector random_state(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  CVector v(dim);
  for (int k = 0; k < dim; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = Complex(re, im);
  }
  v.normalize();
  return StateVector(std::move(v));
}

HermitianOperator random_hermitian(int dim, std::mt19937_64 &rng) {
  const CMatrix a = ginibre(dim, rng);
  CMatrix h = a + a.adjoint();
  // Exact symmetry of the stored entries.
  h = (h + h.adjoint()) / 2.0;
  return HermitianOperator(std::move(h));
}

HermitianOperator random_real_symmetric(int dim, std::mt19937_64 &rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  RMatrix a(dim, dim);
  for (int j = 0; j < dim; ++j) {
    for (int i = 0; i < dim; ++i) {
      a(i, j) = normal(rng);
    }
  }
  const RMatrix s = a + a.transpose();
  return HermitianOperator(s.cast<Complex>());
}

Circuit random_circuit(const HermitianOperator &generator,
                       const HermitianOperator &cost, std::mt19937_64 &rng) {
  const int d = generator.dim();
  CircuitSpec spec;
  spec.initial_state = StateVector::basis(d);
  spec.pre = random_unitary(d, rng);
  spec.generator = generator;
  spec.post = random_unitary(d, rng);
  spec.cost = cost;
  return Circuit(std::move(spec));
}

} // namespace gradshift
