#include "gradshift/gates.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "gradshift/error.hpp"

namespace gradshift {
namespace {

constexpr double kCatalogGapTolerance = 1e-9;

GapSet computed_gaps(const HermitianOperator &generator) {
  return unique_gaps(diagonalize(generator));
}

std::string single_site(int qubits, int site, char pauli) {
  std::string s(static_cast<std::size_t>(qubits), 'I');
  s[static_cast<std::size_t>(site)] = pauli;
  return s;
}

double parse_number(std::string_view text, std::string_view context) {
  double value = 0.0;
  const auto *begin = text.data();
  const auto *end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) {
    throw Error(ErrorCode::ParseError, "cannot parse number \"" +
                                           std::string(text) + "\" in " +
                                           std::string(context));
  }
  return value;
}

} // namespace

const ParameterGenerator &
GateDescriptor::generator(std::string_view parameter) const {
  for (const auto &g : generators) {
    if (g.parameter == parameter) {
      return g;
    }
  }
  throw Error(ErrorCode::InvalidArgument, "gate " + name +
                                              " has no parameter " +
                                              std::string(parameter));
}

HermitianOperator pauli_string(std::string_view spec, double coeff) {
  return HermitianOperator::from_paulis({{coeff, std::string(spec)}});
}

HermitianOperator pauli_sum(std::vector<PauliTerm> terms) {
  return HermitianOperator::from_paulis(std::move(terms));
}

PauliAxis parse_pauli_axis(std::string_view name) {
  if (name == "x" || name == "X") {
    return PauliAxis::X;
  }
  if (name == "y" || name == "Y") {
    return PauliAxis::Y;
  }
  if (name == "z" || name == "Z") {
    return PauliAxis::Z;
  }
  throw Error(ErrorCode::ParseError,
              "unknown Pauli axis \"" + std::string(name) + "\"");
}

GateDescriptor product_feature_map(int qubits, PauliAxis axis) {
  if (qubits < 1 || qubits > 10) {
    throw Error(ErrorCode::InvalidArgument,
                "feature map supports 1 to 10 qubits");
  }
  const char pauli = axis == PauliAxis::X ? 'X' : axis == PauliAxis::Y ? 'Y' : 'Z';
  std::vector<PauliTerm> terms;
  for (int j = 0; j < qubits; ++j) {
    terms.push_back({1.0, single_site(qubits, j, pauli)});
  }
  // N+1 equally spaced levels: gap 2s is realised by N+1-s level pairs.
  GapSet expected;
  expected.source_dim = 1 << qubits;
  for (int s = 1; s <= qubits; ++s) {
    expected.gaps.push_back(2.0 * s);
    expected.multiplicities.push_back(qubits + 1 - s);
  }

  GateDescriptor gate;
  gate.name = std::string("feature_map:") +
              static_cast<char>(std::tolower(pauli)) + ":" +
              std::to_string(qubits);
  gate.parameters = {{"x", 0.0}};
  gate.dim = 1 << qubits;
  gate.generators.push_back(
      {"x", pauli_sum(std::move(terms)), std::move(expected)});
  return gate;
}

CMatrix fsim_matrix(double theta, double phi) {
  const Complex i{0.0, 1.0};
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = 1.0;
  u(1, 1) = std::cos(theta);
  u(1, 2) = -i * std::sin(theta);
  u(2, 1) = -i * std::sin(theta);
  u(2, 2) = std::cos(theta);
  u(3, 3) = std::exp(-i * phi);
  return u;
}

GateDescriptor fsim(double theta, double phi) {
  GateDescriptor gate;
  gate.name = "fsim";
  gate.parameters = {{"theta", theta}, {"phi", phi}};
  gate.dim = 4;
  gate.generators.push_back(
      {"theta", pauli_sum({{1.0, "XX"}, {1.0, "YY"}}),
       GapSet{{2.0, 4.0}, {2, 1}, 4}});
  gate.generators.push_back(
      {"phi",
       pauli_sum({{0.5, "II"}, {-0.5, "ZI"}, {-0.5, "IZ"}, {0.5, "ZZ"}}),
       GapSet{{2.0}, {1}, 4}});
  return gate;
}

CMatrix fsim_unitary(double theta, double phi) {
  const GateDescriptor gate = fsim();
  const HermitianOperator combined =
      gate.generator("theta").generator.scaled(theta) +
      gate.generator("phi").generator.scaled(phi);
  // exp(-i H) with H = (theta G_theta + phi G_phi) / 2.
  const Spectrum spec = diagonalize(combined);
  CVector phases(spec.dim());
  for (int k = 0; k < spec.dim(); ++k) {
    phases(k) = std::polar(1.0, -spec.eigenvalues(k) / 2.0);
  }
  return spec.eigenvectors * phases.asDiagonal() * spec.eigenvectors.adjoint();
}

GateDescriptor cross_resonance(const std::array<double, 5> &gammas) {
  std::vector<PauliTerm> terms = {{gammas[0], "ZI"},
                                  {gammas[1], "ZX"},
                                  {gammas[2], "IX"},
                                  {gammas[3], "IZ"},
                                  {gammas[4], "ZZ"}};
  HermitianOperator generator = pauli_sum(std::move(terms));

  std::ostringstream name;
  name << "cr:";
  for (std::size_t k = 0; k < gammas.size(); ++k) {
    name << (k ? "," : "") << gammas[k];
  }
  GateDescriptor gate;
  gate.name = name.str();
  gate.parameters = {{"x", 0.0}};
  gate.dim = 4;
  GapSet gaps = computed_gaps(generator);
  gate.generators.push_back({"x", std::move(generator), std::move(gaps)});
  return gate;
}

std::vector<GateDescriptor> qutrit_generators() {
  CMatrix g1 = CMatrix::Zero(3, 3);
  g1(0, 1) = 1.0;
  g1(1, 0) = 1.0;
  CMatrix g2 = CMatrix::Zero(3, 3);
  g2(0, 0) = 1.0;
  g2(1, 1) = -1.0;

  std::vector<GateDescriptor> out;
  int index = 1;
  for (auto &m : {g1, g2}) {
    GateDescriptor gate;
    gate.name = "qutrit:" + std::to_string(index++);
    gate.parameters = {{"x", 0.0}};
    gate.dim = 3;
    gate.generators.push_back(
        {"x", HermitianOperator(m), GapSet{{1.0, 2.0}, {2, 1}, 3}});
    out.push_back(std::move(gate));
  }
  return out;
}

void self_check(const GateDescriptor &gate) {
  for (const auto &g : gate.generators) {
    const GapSet actual = computed_gaps(g.generator);
    bool ok = actual.size() == g.expected_gaps.size();
    for (std::size_t s = 0; ok && s < actual.size(); ++s) {
      ok = std::abs(actual.gaps[s] - g.expected_gaps.gaps[s]) <=
           kCatalogGapTolerance;
    }
    if (!ok) {
      throw Error(ErrorCode::InternalConsistency,
                  "catalog gate " + gate.name + " parameter " + g.parameter +
                      " has unexpected gaps");
    }
  }
}

HermitianOperator catalog_generator(std::string_view name) {
  const auto colon = name.find(':');
  if (colon == std::string_view::npos) {
    throw Error(ErrorCode::ParseError,
                "catalog name \"" + std::string(name) + "\" lacks a ':'");
  }
  const std::string_view kind = name.substr(0, colon);
  const std::string_view rest = name.substr(colon + 1);

  if (kind == "pauli") {
    return pauli_string(rest);
  }
  if (kind == "feature_map") {
    const auto sep = rest.find(':');
    if (sep == std::string_view::npos) {
      throw Error(ErrorCode::ParseError,
                  "expected feature_map:<axis>:<N>, got \"" +
                      std::string(name) + "\"");
    }
    const auto axis = parse_pauli_axis(rest.substr(0, sep));
    const double n = parse_number(rest.substr(sep + 1), name);
    if (n != std::floor(n)) {
      throw Error(ErrorCode::ParseError, "qubit count must be an integer");
    }
    return product_feature_map(static_cast<int>(n), axis).generators.front().generator;
  }
  if (kind == "fsim") {
    return fsim().generator(rest).generator;
  }
  if (kind == "cr") {
    std::array<double, 5> gammas{};
    std::size_t count = 0;
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const auto token = rest.substr(
          pos, comma == std::string_view::npos ? std::string_view::npos
                                               : comma - pos);
      if (count >= gammas.size()) {
        throw Error(ErrorCode::ParseError, "cr needs exactly 5 coefficients");
      }
      gammas[count++] = parse_number(token, name);
      if (comma == std::string_view::npos) {
        break;
      }
      pos = comma + 1;
    }
    if (count != gammas.size()) {
      throw Error(ErrorCode::ParseError, "cr needs exactly 5 coefficients");
    }
    return cross_resonance(gammas).generators.front().generator;
  }
  if (kind == "qutrit") {
    const auto gens = qutrit_generators();
    if (rest == "1") {
      return gens[0].generators.front().generator;
    }
    if (rest == "2") {
      return gens[1].generators.front().generator;
    }
  }
  throw Error(ErrorCode::ParseError,
              "unknown catalog generator \"" + std::string(name) + "\"");
}

} // namespace gradshift
