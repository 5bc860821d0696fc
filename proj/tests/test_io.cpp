#include "doctest.h"

#include <random>

#include "gradshift/error.hpp"
#include "gradshift/gates.hpp"
#include "gradshift/io.hpp"
#include "support.hpp"

using namespace gradshift;

TEST_SUITE("io") {

TEST_CASE("angle literals") {
  CHECK(parse_angle("1.5") == 1.5);
  CHECK(parse_angle("pi") == kPi);
  CHECK(parse_angle("-pi/2") == -kPi / 2);
  CHECK(parse_angle("0.8pi") == 0.8 * kPi);
  CHECK(parse_angle("3pi/4") == 3 * kPi / 4);
  CHECK(parse_angle("2*pi/3") == 2 * kPi / 3);
  CHECK(parse_angle(" 1/4 ") == 0.25);
  CHECK(parse_angle_list("0.8pi,0.29pi") ==
        std::vector<double>{0.8 * kPi, 0.29 * kPi});
  for (const char *bad : {"", "pie", "pi/", "x", "1.2.3", "pi*2"}) {
    CHECK_THROWS_AS(parse_angle(bad), Error);
  }
}

TEST_CASE("generators round trip through json") {
  std::mt19937_64 rng(71);
  const HermitianOperator dense = random_hermitian(3, rng);
  const HermitianOperator back = parse_generator(Json::parse(generator_to_json(dense).dump()));
  CHECK(back.matrix() == dense.matrix());

  const HermitianOperator paulis = pauli_sum({{0.5, "XZ"}, {-1.0, "YY"}});
  const Json j = generator_to_json(paulis);
  CHECK(j.contains("paulis"));
  CHECK(parse_generator(j).matrix() == paulis.matrix());

  CHECK(parse_generator(Json("fsim:theta")).dim() == 4);
}

TEST_CASE("generator parse errors name the field") {
  try {
    parse_generator(Json::parse(R"({"paulis": [{"coeff": 1.0}]})"));
    FAIL("accepted a term without a string");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::ParseError);
    CHECK(std::string(e.what()).find("paulis[0].string") != std::string::npos);
  }
  try {
    parse_generator(Json::parse(R"({"dim": 2, "entries": [[0, 1], [0, 0]]})"));
    FAIL("accepted a non-hermitian matrix");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
}

TEST_CASE("rules round trip through json") {
  const ShiftRule s2 = closed_s2(std::array<double, 2>{2.0, 4.0},
                                 std::array<double, 2>{0.8 * kPi, 0.29 * kPi});
  const ShiftRule r = apply_chain(s2, 0.5);
  const ShiftRule back = rule_from_json(Json::parse(rule_to_json(r).dump()));
  CHECK(back.method == r.method);
  CHECK(back.gaps.gaps == r.gaps.gaps);
  CHECK(back.chain_factor == r.chain_factor);
  CHECK(back.condition_number == r.condition_number);
  REQUIRE(back.terms.size() == r.terms.size());
  for (std::size_t i = 0; i < r.terms.size(); ++i) {
    CHECK(back.terms[i].shift == r.terms[i].shift);
    CHECK(back.terms[i].weight == r.terms[i].weight);
  }

  const ShiftRule tri = triangulation_general(GapSet::from_values({2.0}),
                                              std::array<double, 3>{0.0, 0.5, -1.0}, 0.3);
  const Json tj = rule_to_json(tri);
  CHECK(tj["x"].get<double>() == 0.3);
  CHECK(*rule_from_json(tj).anchor == 0.3);
}

TEST_CASE("circuit json") {
  const Json j = Json::parse(R"({
    "generator": "pauli:X",
    "cost": {"paulis": [{"coeff": 1.0, "string": "Z"}]},
    "initial_state": [[1, 0], [0, 0]],
    "pre": "identity",
    "post": [{"gate": "pauli:Z", "param": "pi/3"}],
    "dphi_dx": 2.0
  })");
  const Circuit c(parse_circuit(j));
  CHECK(c.spec().dphi_dx == 2.0);
  CHECK(expectation(c, 1.0) == doctest::Approx(std::cos(1.0)));

  const Json haar = Json::parse(R"({"generator": "fsim:theta", "cost": "pauli:ZZ",
                                     "pre": {"haar": 5}, "post": {"orthogonal": 6}})");
  const Circuit h1(parse_circuit(haar));
  const Circuit h2(parse_circuit(haar));
  CHECK(h1.spec().pre == h2.spec().pre);
  CHECK(h1.spec().post.imag().norm() == 0.0);

  CHECK_THROWS_AS(parse_circuit(Json::parse(R"({"generator": "pauli:Z"})")), Error);
  try {
    parse_circuit(Json::parse(R"({"dim": 4, "generator": "pauli:Z", "cost": "pauli:Z"})"));
    FAIL("accepted a dimension mismatch");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("spectrum report") {
  const Json r = spectrum_report(diagonalize(catalog_generator("fsim:theta")));
  REQUIRE(r["gaps"].size() == 2);
  CHECK(r["gaps"][0].get<double>() == doctest::Approx(2.0));
  CHECK(r["gaps"][1].get<double>() == doctest::Approx(4.0));
  CHECK(r["multiplicities"] == Json::array({2, 1}));
  CHECK(r["S"] == 2);
  CHECK(r["S_max"] == 6);
  const Json z = spectrum_report(diagonalize(HermitianOperator::identity(2)));
  CHECK(z["S"] == 0);
  CHECK(z["zero_derivative"] == true);
}

}
