#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "commands.hpp"
#include "gradshift/error.hpp"
#include "gradshift/gates.hpp"
#include "gradshift/io.hpp"

using namespace gradshift;
namespace fs = std::filesystem;

namespace {

std::string data(const char *name) {
  return (fs::path(GRADSHIFT_TEST_DATA) / name).string();
}

std::vector<double> weights_of(const Json &rule) {
  std::vector<double> out;
  for (const auto &t : rule["terms"]) {
    out.push_back(t["weight"].get<double>());
  }
  return out;
}

} // namespace

TEST_SUITE("cli") {

TEST_CASE("analyze catalog generators") {
  const Json r = cli::analyze({"fsim:theta"});
  REQUIRE(r["gaps"].size() == 2);
  CHECK(r["gaps"][0].get<double>() == doctest::Approx(2.0));
  CHECK(r["gaps"][1].get<double>() == doctest::Approx(4.0));
  CHECK(cli::analyze({"pauli:Z"})["gaps"] == Json::array({2.0}));
}

TEST_CASE("analyze a generator file matches the library bit for bit") {
  std::mt19937_64 rng(81);
  const HermitianOperator g = random_hermitian(5, rng);
  const fs::path path = fs::temp_directory_path() / "gradshift_random_hermitian.json";
  {
    std::ofstream out(path);
    out << generator_to_json(g).dump();
  }
  const Json cli_report = cli::analyze({path.string()});
  const Json lib_report = spectrum_report(diagonalize(g));
  CHECK(cli_report.dump() == lib_report.dump());
  fs::remove(path);
}

TEST_CASE("analyze surfaces non-hermitian input") {
  try {
    cli::analyze({data("bad_hermitian.json")});
    FAIL("accepted a non-hermitian generator");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::NonHermitianInput);
  }
}

TEST_CASE("rule command") {
  SUBCASE("parameter shift table") {
    cli::RuleOptions o;
    o.gaps = "2";
    o.shifts = "pi/2";
    const Json r = cli::rule(o);
    CHECK(weights_of(r) == std::vector<double>{0.5, -0.5});
  }
  SUBCASE("closed two-gap rule at the low-variance shifts") {
    cli::RuleOptions o;
    o.gaps = "2,4";
    o.method = "closed-S2";
    o.shifts = "0.8pi,0.29pi";
    const Json r = cli::rule(o);
    const ShiftRule lib = closed_s2(std::array<double, 2>{2.0, 4.0},
                                    std::array<double, 2>{0.8 * kPi, 0.29 * kPi});
    CHECK(weights_of(r) == lib.weights());
    CHECK(analytic_variance(rule_from_json(r)) == doctest::Approx(1.4034).epsilon(1e-3));
  }
  SUBCASE("three-gap closed rule matches the symmetric solver") {
    cli::RuleOptions o;
    o.gaps = "1,3,4";
    o.method = "closed-S3";
    const Json r = cli::rule(o);
    REQUIRE(r["terms"].size() == 6);
    const GapSet gaps = GapSet::from_values({1, 3, 4});
    const auto lib = symmetric_rule(gaps, default_shifts(gaps)).weights();
    const auto w = weights_of(r);
    for (std::size_t i = 0; i < 6; ++i) {
      CHECK(std::abs(w[i] - lib[i]) < 1e-12);
    }
  }
  SUBCASE("gaps from a generator") {
    cli::RuleOptions o;
    o.generator = "fsim:phi";
    CHECK(cli::rule(o)["terms"].size() == 2);
  }
  SUBCASE("singular shifts name the stencil") {
    cli::RuleOptions o;
    o.gaps = "2,4";
    o.shifts = "0.5,0.5";
    try {
      cli::rule(o);
      FAIL("accepted a singular stencil");
    } catch (const Error &e) {
      CHECK(e.code() == ErrorCode::SingularSystem);
      CHECK_FALSE(is_input_error(e.code()));
      CHECK(std::string(e.what()).find("shifts") != std::string::npos);
    }
  }
  SUBCASE("every method builds a default rule") {
    for (const char *m : {"symmetric-general", "triangulation-general", "real-symmetric"}) {
      cli::RuleOptions o;
      o.gaps = "2,4";
      o.method = m;
      o.x = "0.3";
      CHECK_NOTHROW(cli::rule(o));
    }
    cli::RuleOptions o;
    o.gaps = "2";
    o.method = "triangulation-S1";
    CHECK(weights_of(cli::rule(o)).size() == 3);
    o.method = "closed-S1";
    CHECK(weights_of(cli::rule(o)).size() == 2);
  }
}

TEST_CASE("diff command") {
  SUBCASE("cos circuit with the parameter shift rule") {
    cli::DiffOptions o;
    o.circuit = data("cos_circuit.json");
    o.x = "1.0";
    o.shifts = "pi/2";
    o.oracle = true;
    const Json r = cli::diff(o);
    CHECK(std::abs(r["value"].get<double>() + std::sin(1.0)) < 1e-10);
    CHECK(r["oracle"]["agrees"] == true);
    CHECK(r["warnings"].empty());
  }
  SUBCASE("sampled fsim estimate is reproducible") {
    cli::DiffOptions o;
    o.circuit = data("fsim_circuit.json");
    o.x = "0.7";
    o.method = "closed-s2";
    o.shots = 10000;
    o.seed = 7;
    const std::string a = cli::diff(o).dump();
    const std::string b = cli::diff(o).dump();
    CHECK(a == b);
    const Json j = Json::parse(a);
    CHECK(j["estimate"]["seed"] == 7);
    CHECK(j["estimate"]["per_term_estimates"].size() == 4);

    const Circuit c(parse_circuit(load_json_file(o.circuit)));
    const GapSet gaps = c.generator_gaps();
    const auto d = default_shifts(gaps);
    const ShiftRule lib = closed_s2(std::array<double, 2>{gaps.gaps[0], gaps.gaps[1]},
                                    std::array<double, 2>{d[0], d[1]});
    CHECK(j["estimate"]["value"].get<double>() ==
          estimate_derivative(c, 0.7, lib, 10000, 7).value);
  }
  SUBCASE("cross-resonance closed rule agrees with the oracle") {
    cli::DiffOptions o;
    o.circuit = data("cr_circuit.json");
    o.x = "-0.4";
    o.method = "closed-S3";
    o.oracle = true;
    const Json r = cli::diff(o);
    CHECK(r["oracle"]["abs_error_exact"].get<double>() < 1e-9);
  }
  SUBCASE("chain factor and reduced rule on an encoded circuit") {
    cli::DiffOptions o;
    o.circuit = data("encoded_circuit.json");
    o.x = "0.9";
    o.method = "real-symmetric";
    o.oracle = true;
    const Json r = cli::diff(o);
    CHECK(r["rule"]["terms"].size() == 4);
    CHECK(r["rule"]["chain_factor"] == 2.0);
    CHECK(r["oracle"]["abs_error_exact"].get<double>() < 1e-9);
  }
  SUBCASE("missing gaps become a warning") {
    cli::DiffOptions o;
    o.circuit = data("fsim_circuit.json");
    o.gaps = "2";
    o.oracle = true;
    const Json r = cli::diff(o);
    REQUIRE(r["warnings"].size() == 1);
    CHECK(r["warnings"][0].get<std::string>().find("not covered") != std::string::npos);
    CHECK(r["oracle"]["agrees"] == false);
  }
  SUBCASE("a rule file") {
    const fs::path path = fs::temp_directory_path() / "gradshift_rule.json";
    {
      std::ofstream out(path);
      out << rule_to_json(closed_s1(2.0, kPi / 2)).dump();
    }
    cli::DiffOptions o;
    o.circuit = data("cos_circuit.json");
    o.x = "1.0";
    o.rule_file = path.string();
    CHECK(std::abs(cli::diff(o)["value"].get<double>() + std::sin(1.0)) < 1e-10);
    fs::remove(path);
  }
}

TEST_CASE("variance map presets") {
  cli::VarianceMapOptions o;
  o.preset = "fig2a";
  auto r = cli::variance_map(o);
  CHECK(r.summary["min_value"].get<double>() == doctest::Approx(0.5));
  CHECK(std::abs(r.summary["argmin"][0].get<double>() - kPi / 2) <= 0.01 * kPi);

  o.preset = "fig3";
  r = cli::variance_map(o);
  CHECK(r.summary["min_value"].get<double>() == doctest::Approx(1.40).epsilon(0.02 / 1.4));

  o.preset = "fig2b";
  r = cli::variance_map(o);
  CHECK(r.summary["min_value"].get<double>() == doctest::Approx(0.5));
}

TEST_CASE("variance map csv is deterministic and matches the library") {
  cli::VarianceMapOptions o;
  o.family = "symmetric-s2";
  o.gaps = "2,4";
  o.grid = "0:pi:21,0:pi:21";
  std::ostringstream a;
  std::ostringstream b;
  write_grid_csv(a, cli::variance_map(o).grid);
  write_grid_csv(b, cli::variance_map(o).grid);
  CHECK(a.str() == b.str());

  GridSpec spec;
  spec.family = GridFamily::SymmetricS2;
  spec.gaps = {2, 4};
  spec.axis1 = {0, kPi, 21};
  spec.axis2 = GridAxis{0, kPi, 21};
  std::ostringstream lib;
  write_grid_csv(lib, variance_grid(spec));
  CHECK(a.str() == lib.str());
}

TEST_CASE("grid parsing") {
  const auto axes = cli::parse_grid("0:pi:11,-pi:pi:5");
  REQUIRE(axes.size() == 2);
  CHECK(axes[0].stop == kPi);
  CHECK(axes[1].points == 5);
  CHECK_THROWS_AS(cli::parse_grid("0:pi"), Error);
  CHECK_THROWS_AS(cli::parse_grid("0:pi:2.5"), Error);
  CHECK_THROWS_AS(cli::parse_grid("0:1:3,0:1:3,0:1:3"), Error);
}

TEST_CASE("verify filter selects variance checks") {
  cli::VerifyCliOptions o;
  o.filter = "variance";
  const auto results = cli::verify(o);
  REQUIRE_FALSE(results.empty());
  for (const auto &r : results) {
    const bool tagged =
        std::find(r.tags.begin(), r.tags.end(), "variance") != r.tags.end();
    CHECK(tagged);
  }
  o.mutation = "bogus";
  CHECK_THROWS_AS(cli::verify(o), Error);
}

}
