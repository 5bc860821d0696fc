#pragma once

#include <array>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gradshift/spectral.hpp"
#include "gradshift/types.hpp"

namespace gradshift {

enum class PauliAxis { X, Y, Z };

/// A differentiable parameter of a catalog gate, with its generator in the
/// U = exp(-i param G / 2) convention and the golden gap set.
struct ParameterGenerator {
  std::string parameter;
  HermitianOperator generator;
  GapSet expected_gaps;
};

struct GateDescriptor {
  std::string name;
  std::vector<std::pair<std::string, double>> parameters;
  std::vector<ParameterGenerator> generators;
  int dim = 0;

  const ParameterGenerator &generator(std::string_view parameter) const;
};

HermitianOperator pauli_string(std::string_view spec, double coeff = 1.0);
HermitianOperator pauli_sum(std::vector<PauliTerm> terms);

/// prod_j R_axis,j(x): generator sum_j P_axis,j with gaps {2, 4, ..., 2N}.
GateDescriptor product_feature_map(int qubits, PauliAxis axis = PauliAxis::Z);

/// fSim(theta, phi) with generators X1X2 + Y1Y2 (theta) and
/// (I - Z1 - Z2 + Z1Z2)/2 (phi).
GateDescriptor fsim(double theta = 0.0, double phi = 0.0);
/// Closed-form 4x4 fSim matrix.
CMatrix fsim_matrix(double theta, double phi);
/// exp(-i (theta G_theta + phi G_phi) / 2) from the combined generator.
CMatrix fsim_unitary(double theta, double phi);

/// g1 Z1 + g2 Z1X2 + g3 X2 + g4 Z2 + g5 Z1Z2; gaps computed numerically.
GateDescriptor cross_resonance(const std::array<double, 5> &gammas);

/// The two printed SU(3) generators, spectrum {1, 0, -1}, gaps {1, 2}.
std::vector<GateDescriptor> qutrit_generators();

/// Throws Error{InternalConsistency} if any generator's computed gaps differ
/// from its expected gaps by more than 1e-9.
void self_check(const GateDescriptor &gate);

/// Resolves a catalog generator name: "pauli:<string>", "feature_map:<axis>:<N>",
/// "fsim:theta", "fsim:phi", "cr:<g1,...,g5>", "qutrit:1", "qutrit:2".
HermitianOperator catalog_generator(std::string_view name);

PauliAxis parse_pauli_axis(std::string_view name);

} // namespace gradshift
