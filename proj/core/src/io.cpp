#include "gradshift/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "gradshift/error.hpp"
#include "gradshift/gates.hpp"

namespace gradshift {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

double parse_plain(std::string_view text, std::string_view whole) {
  text = trim(text);
  double value = 0.0;
  const auto [ptr, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error(ErrorCode::ParseError,
                "cannot parse angle \"" + std::string(whole) + "\"");
  }
  return value;
}

[[noreturn]] void field_error(std::string_view field, const std::string &what) {
  throw Error(ErrorCode::ParseError,
              "field \"" + std::string(field) + "\": " + what);
}

const Json &require(const Json &j, std::string_view field,
                    std::string_view context) {
  if (!j.is_object() || !j.contains(field)) {
    field_error(std::string(context) + "." + std::string(field), "missing");
  }
  return j.at(std::string(field));
}

Complex parse_complex(const Json &j, std::string_view field) {
  if (j.is_number()) {
    return {j.get<double>(), 0.0};
  }
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  field_error(field, "expected a number or a [re, im] pair");
}

CMatrix parse_matrix(const Json &j, std::string_view field) {
  const Json &entries = require(j, "entries", field);
  if (!entries.is_array() || entries.empty()) {
    field_error(std::string(field) + ".entries", "expected a non-empty array");
  }
  const auto rows = static_cast<Eigen::Index>(entries.size());
  if (j.contains("dim") &&
      (!j["dim"].is_number_integer() || j["dim"].get<Eigen::Index>() != rows)) {
    field_error(std::string(field) + ".dim", "does not match the entries");
  }
  CMatrix m(rows, rows);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json &row = entries[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != rows) {
      field_error(std::string(field) + ".entries[" + std::to_string(r) + "]",
                  "row length differs from the row count");
    }
    for (Eigen::Index c = 0; c < rows; ++c) {
      m(r, c) = parse_complex(row[static_cast<std::size_t>(c)],
                              std::string(field) + ".entries[" +
                                  std::to_string(r) + "][" +
                                  std::to_string(c) + "]");
    }
  }
  return m;
}

Json complex_matrix_json(const CMatrix &m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

HermitianOperator parse_generator_field(const Json &j, std::string_view field) {
  try {
    return parse_generator(j);
  } catch (const Error &e) {
    if (e.code() == ErrorCode::ParseError) {
      field_error(field, e.what());
    }
    throw;
  }
}

CMatrix parse_unitary(const Json &j, std::string_view field, int dim) {
  if (j.is_null() || (j.is_string() && j.get<std::string>() == "identity")) {
    return CMatrix::Identity(dim, dim);
  }
  if (j.is_object() && j.contains("haar")) {
    std::mt19937_64 rng(j["haar"].get<std::uint64_t>());
    return random_unitary(dim, rng);
  }
  if (j.is_object() && j.contains("orthogonal")) {
    std::mt19937_64 rng(j["orthogonal"].get<std::uint64_t>());
    return random_orthogonal(dim, rng);
  }
  if (j.is_object() && j.contains("entries")) {
    return parse_matrix(j, field);
  }
  if (j.is_array()) {
    CMatrix u = CMatrix::Identity(dim, dim);
    for (std::size_t k = 0; k < j.size(); ++k) {
      const std::string step = std::string(field) + "[" + std::to_string(k) + "]";
      const HermitianOperator g =
          parse_generator_field(require(j[k], "gate", step), step + ".gate");
      const Json &param = require(j[k], "param", step);
      const double t = param.is_string() ? parse_angle(param.get<std::string>())
                                         : param.get<double>();
      if (g.dim() != dim) {
        throw Error(ErrorCode::DimensionMismatch,
                    step + " acts on dimension " + std::to_string(g.dim()));
      }
      u = generator_unitary(g, t) * u;
    }
    return u;
  }
  field_error(field, "expected \"identity\", a matrix, {\"haar\": seed}, "
                     "{\"orthogonal\": seed} or a list of gate steps");
}

} // namespace

double parse_angle(std::string_view text) {
  const std::string_view whole = text;
  text = trim(text);
  double sign = 1.0;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    sign = text.front() == '-' ? -1.0 : 1.0;
    text.remove_prefix(1);
    text = trim(text);
  }

  std::size_t pi_pos = text.find("pi");
  std::size_t pi_len = 2;
  if (pi_pos == std::string_view::npos) {
    pi_pos = text.find("\xCF\x80"); // UTF-8 pi
  }
  if (pi_pos == std::string_view::npos) {
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) {
      return sign * parse_plain(text, whole);
    }
    return sign * parse_plain(text.substr(0, slash), whole) /
           parse_plain(text.substr(slash + 1), whole);
  }

  std::string_view coeff_text = trim(text.substr(0, pi_pos));
  if (!coeff_text.empty() && coeff_text.back() == '*') {
    coeff_text.remove_suffix(1);
  }
  const double coeff = coeff_text.empty() ? 1.0 : parse_plain(coeff_text, whole);
  std::string_view rest = trim(text.substr(pi_pos + pi_len));
  double divisor = 1.0;
  if (!rest.empty()) {
    if (rest.front() != '/') {
      throw Error(ErrorCode::ParseError,
                  "cannot parse angle \"" + std::string(whole) + "\"");
    }
    divisor = parse_plain(rest.substr(1), whole);
  }
  return sign * coeff * kPi / divisor;
}

std::vector<double> parse_angle_list(std::string_view text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = text.find(',', pos);
    out.push_back(parse_angle(text.substr(
        pos, comma == std::string_view::npos ? std::string_view::npos
                                             : comma - pos)));
    if (comma == std::string_view::npos) {
      break;
    }
    pos = comma + 1;
  }
  return out;
}

HermitianOperator parse_generator(const Json &j) {
  if (j.is_string()) {
    return catalog_generator(j.get<std::string>());
  }
  if (j.is_object() && j.contains("paulis")) {
    const Json &list = j["paulis"];
    if (!list.is_array() || list.empty()) {
      field_error("paulis", "expected a non-empty array");
    }
    std::vector<PauliTerm> terms;
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string ctx = "paulis[" + std::to_string(k) + "]";
      const Json &coeff = require(list[k], "coeff", ctx);
      const Json &str = require(list[k], "string", ctx);
      if (!coeff.is_number() || !str.is_string()) {
        field_error(ctx, "expected numeric coeff and string");
      }
      terms.push_back({coeff.get<double>(), str.get<std::string>()});
    }
    return HermitianOperator::from_paulis(std::move(terms));
  }
  if (j.is_object() && j.contains("entries")) {
    return HermitianOperator(parse_matrix(j, "generator"));
  }
  throw Error(ErrorCode::ParseError,
              "generator must be a catalog name, {\"paulis\": ...} or "
              "{\"dim\": d, \"entries\": ...}");
}

Json generator_to_json(const HermitianOperator &op) {
  if (op.pauli_terms()) {
    Json terms = Json::array();
    for (const auto &t : *op.pauli_terms()) {
      terms.push_back({{"coeff", t.coeff}, {"string", t.string}});
    }
    return {{"paulis", terms}};
  }
  return {{"dim", op.dim()}, {"entries", complex_matrix_json(op.matrix())}};
}

CircuitSpec parse_circuit(const Json &j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::ParseError, "circuit must be a JSON object");
  }
  CircuitSpec spec;
  spec.generator = parse_generator_field(require(j, "generator", "circuit"),
                                         "circuit.generator");
  const int dim = spec.generator.dim();
  if (j.contains("dim") && j["dim"].get<int>() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "circuit.dim is " + std::to_string(j["dim"].get<int>()) +
                    " but the generator has dimension " + std::to_string(dim));
  }
  spec.cost = j.contains("cost")
                  ? parse_generator_field(j["cost"], "circuit.cost")
                  : throw Error(ErrorCode::ParseError,
                                "field \"circuit.cost\": missing");

  if (j.contains("initial_state")) {
    const Json &init = j["initial_state"];
    if (init.is_number_integer()) {
      spec.initial_state = StateVector::basis(dim, init.get<int>());
    } else if (init.is_array()) {
      CVector amps(static_cast<Eigen::Index>(init.size()));
      for (std::size_t k = 0; k < init.size(); ++k) {
        amps(static_cast<Eigen::Index>(k)) = parse_complex(
            init[k], "circuit.initial_state[" + std::to_string(k) + "]");
      }
      spec.initial_state = StateVector(std::move(amps));
    } else {
      field_error("circuit.initial_state",
                  "expected a basis index or an amplitude array");
    }
  } else {
    spec.initial_state = StateVector::basis(dim);
  }
  spec.pre = parse_unitary(j.value("pre", Json()), "circuit.pre", dim);
  spec.post = parse_unitary(j.value("post", Json()), "circuit.post", dim);
  if (j.contains("dphi_dx")) {
    spec.dphi_dx = j["dphi_dx"].get<double>();
  }
  return spec;
}

Json rule_to_json(const ShiftRule &rule) {
  Json terms = Json::array();
  for (const auto &t : rule.terms) {
    terms.push_back({{"shift", t.shift}, {"weight", t.weight}});
  }
  Json out = {{"method", std::string(to_string(rule.method))},
              {"gaps", rule.gaps.gaps},
              {"terms", terms},
              {"condition_number", rule.condition_number},
              {"chain_factor", rule.chain_factor}};
  if (rule.anchor) {
    out["x"] = *rule.anchor;
  }
  return out;
}

ShiftRule rule_from_json(const Json &j) {
  try {
    ShiftRule rule;
    rule.method = parse_rule_method(require(j, "method", "rule").get<std::string>());
    rule.gaps = GapSet::from_values(
        require(j, "gaps", "rule").get<std::vector<double>>());
    for (const auto &t : require(j, "terms", "rule")) {
      rule.terms.push_back(
          {t.at("shift").get<double>(), t.at("weight").get<double>()});
    }
    rule.condition_number = j.value("condition_number", 1.0);
    rule.chain_factor = j.value("chain_factor", 1.0);
    if (j.contains("x")) {
      rule.anchor = j["x"].get<double>();
    }
    return rule;
  } catch (const Json::exception &e) {
    throw Error(ErrorCode::ParseError, std::string("rule: ") + e.what());
  }
}

Json estimate_to_json(const DerivativeEstimate &estimate) {
  Json terms = Json::array();
  for (const auto &t : estimate.per_term) {
    terms.push_back({{"shift", t.shift},
                     {"weight", t.weight},
                     {"estimate", t.estimate},
                     {"shots", t.shots}});
  }
  return {{"value", estimate.value},
          {"per_term_estimates", terms},
          {"analytic_variance", estimate.analytic_variance},
          {"seed", estimate.seed},
          {"shots_per_term", estimate.shots_per_term},
          {"chain_factor", estimate.chain_factor}};
}

Json spectrum_report(const Spectrum &spectrum) {
  const int d = spectrum.dim();
  Json out = {{"dim", d},
              {"eigenvalues", std::vector<double>(spectrum.eigenvalues.data(),
                                                  spectrum.eigenvalues.data() +
                                                      d)},
              {"S_max", d * (d - 1) / 2}};
  try {
    const GapSet gaps = unique_gaps(spectrum);
    out["gaps"] = gaps.gaps;
    out["multiplicities"] = gaps.multiplicities;
    out["S"] = gaps.size();
    out["zero_derivative"] = false;
  } catch (const Error &e) {
    if (e.code() != ErrorCode::EmptyGapSet) {
      throw;
    }
    out["gaps"] = Json::array();
    out["multiplicities"] = Json::array();
    out["S"] = 0;
    out["zero_derivative"] = true;
  }
  return out;
}

Json load_json_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::ParseError, "cannot open " + path);
  }
  try {
    return Json::parse(in);
  } catch (const Json::parse_error &e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

} // namespace gradshift
