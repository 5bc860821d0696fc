#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "gradshift/rules.hpp"
#include "gradshift/sampling.hpp"
#include "gradshift/sim.hpp"
#include "gradshift/spectral.hpp"

namespace gradshift {

using Json = nlohmann::json;

/// Parses "1.5", "pi", "-pi/2", "0.8pi", "3pi/4", "2*pi/3".
/// Throws Error{ParseError}.
double parse_angle(std::string_view text);
/// Comma-separated list of parse_angle values.
std::vector<double> parse_angle_list(std::string_view text);

/// Generator JSON: a catalog name string, {"dim": d, "entries": [[[re, im],
/// ...], ...]} or {"paulis": [{"coeff": c, "string": "XZ"}, ...]}.
HermitianOperator parse_generator(const Json &j);
Json generator_to_json(const HermitianOperator &op);

/// Circuit JSON with fields dim, initial_state (optional), pre, generator,
/// post, cost, dphi_dx (optional). pre/post accept "identity", a raw matrix
/// object, {"haar": seed}, {"orthogonal": seed}, or a list of
/// {"gate": <generator>, "param": t} steps applied first to last.
CircuitSpec parse_circuit(const Json &j);

Json rule_to_json(const ShiftRule &rule);
ShiftRule rule_from_json(const Json &j);

Json estimate_to_json(const DerivativeEstimate &estimate);

Json spectrum_report(const Spectrum &spectrum);

/// Reads and parses a JSON file; Error{ParseError} names the file.
Json load_json_file(const std::string &path);

} // namespace gradshift
