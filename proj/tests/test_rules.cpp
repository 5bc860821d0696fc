#include "doctest.h"

#include <array>
#include <functional>
#include <random>

#include "gradshift/error.hpp"
#include "gradshift/gates.hpp"
#include "gradshift/rules.hpp"
#include "gradshift/sim.hpp"
#include "support.hpp"

using namespace gradshift;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  FAIL("expected gradshift::Error");
  return ErrorCode::InternalConsistency;
}

void check_same_weights(const ShiftRule &a, const ShiftRule &b, double tol) {
  REQUIRE(a.terms.size() == b.terms.size());
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    CHECK(a.terms[i].shift == doctest::Approx(b.terms[i].shift).epsilon(1e-15));
    CHECK(std::abs(a.terms[i].weight - b.terms[i].weight) <= tol);
  }
}

double rule_error(const Circuit &c, double x, const ShiftRule &rule) {
  return std::abs(evaluate_rule(c, x, rule) - oracle::richardson(c, x));
}

} // namespace

TEST_SUITE("rules") {

TEST_CASE("method names round trip") {
  for (auto m : {RuleMethod::SymmetricGeneral, RuleMethod::ClosedS1,
                 RuleMethod::TriangulationS1, RuleMethod::ClosedS2,
                 RuleMethod::ClosedS3, RuleMethod::TriangulationGeneral,
                 RuleMethod::RealSymmetric}) {
    CHECK(parse_rule_method(to_string(m)) == m);
  }
  CHECK(parse_rule_method("CLOSED-s2") == RuleMethod::ClosedS2);
  CHECK(code_of([] { parse_rule_method("newton"); }) == ErrorCode::ParseError);
}

TEST_CASE("pi/2 on a single gap of 2 gives the +-1/2 table") {
  const ShiftRule r = symmetric_rule(GapSet::from_values({2.0}),
                                     std::array<double, 1>{kPi / 2});
  REQUIRE(r.terms.size() == 2);
  CHECK(r.terms[0].shift == kPi / 2);
  CHECK(r.terms[0].weight == 0.5);
  CHECK(r.terms[1].shift == -kPi / 2);
  CHECK(r.terms[1].weight == -0.5);
  CHECK(r.condition_number == doctest::Approx(1.0));
}

TEST_CASE("symmetric weights agree with a FullPivLU solve") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    const int s = 1 + trial % 4;
    std::vector<double> gaps;
    for (int k = 0; k < s; ++k) {
      gaps.push_back(k + 1 + oracle::uniform(rng, 0.0, 0.8));
    }
    const GapSet gs = GapSet::from_values(gaps);
    const std::vector<double> shifts = default_shifts(gs);
    const ShiftRule r = symmetric_rule(gs, shifts);
    const auto w = oracle::sine_weights(gs.gaps, shifts);
    for (int l = 0; l < s; ++l) {
      const double tol = 1e-12 * std::max(1.0, std::abs(w[l])) * r.condition_number;
      CHECK(std::abs(r.terms[2 * l].weight - w[l]) <= tol);
      CHECK(r.terms[2 * l + 1].weight == -r.terms[2 * l].weight);
    }
  }
}

TEST_CASE("closed forms equal the general solver") {
  std::mt19937_64 rng(32);
  for (int trial = 0; trial < 40; ++trial) {
    const double d1 = oracle::uniform(rng, 0.5, 1.5);
    const double d2 = oracle::uniform(rng, 1.7, 2.5);
    const double d3 = oracle::uniform(rng, 2.7, 3.5);

    const double g = oracle::uniform(rng, 0.5, 3.0);
    check_same_weights(closed_s1(g, d1 / g),
                       symmetric_rule(GapSet::from_values({g}),
                                      std::array<double, 1>{d1 / g}),
                       1e-13);

    const std::array<double, 2> g2{1.0, oracle::uniform(rng, 1.5, 3.0)};
    const std::array<double, 2> s2{d1 / g2[1], d2 / g2[1]};
    check_same_weights(closed_s2(g2, s2),
                       symmetric_rule(GapSet::from_values({g2[0], g2[1]}), s2),
                       1e-11);

    const std::array<double, 3> g3{1.0, 3.0, 4.0};
    const std::array<double, 3> s3{d1 / 4, d2 / 4, d3 / 4};
    const ShiftRule general = symmetric_rule(GapSet::from_values({1.0, 3.0, 4.0}), s3);
    check_same_weights(closed_s3(g3, s3), general, 1e-12 * general.condition_number);
  }
}

TEST_CASE("single-gap triangulation equals the general difference solver") {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const std::array<double, 3> shifts{oracle::uniform(rng, 0.2, 2.5),
                                       oracle::uniform(rng, -2.5, -0.2), 0.0};
    const ShiftRule closed = triangulation_s1(2.0, shifts);
    const ShiftRule general =
        triangulation_general(GapSet::from_values({2.0}), shifts,
                              oracle::uniform(rng, -3, 3));
    REQUIRE(general.terms.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto it = std::find_if(general.terms.begin(), general.terms.end(),
                                   [&](const ShiftTerm &t) {
                                     return t.shift == closed.terms[i].shift;
                                   });
      REQUIRE(it != general.terms.end());
      CHECK(it->weight == doctest::Approx(closed.terms[i].weight).epsilon(1e-9));
    }
  }
}

TEST_CASE("rules are exact on random circuits") {
  std::mt19937_64 rng(34);
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = 2 + trial % 2;
    const HermitianOperator g = random_hermitian(dim, rng);
    const Circuit c = random_circuit(g, random_hermitian(dim, rng), rng);
    const GapSet gaps = c.generator_gaps();
    const double x = oracle::uniform(rng, -kPi, kPi);

    const ShiftRule sym = symmetric_rule(gaps, default_shifts(gaps));
    CHECK(std::abs(evaluate_rule(c, x, sym) - exact_derivative(c, x)) < 1e-8);
    CHECK(rule_error(c, x, sym) < 1e-6);

    std::vector<double> stencil{0.0};
    for (const double d : default_shifts(gaps)) {
      stencil.push_back(d);
      stencil.push_back(-d);
    }
    const ShiftRule tri = triangulation_general(gaps, stencil, x);
    CHECK(std::abs(evaluate_rule(c, x, tri) - exact_derivative(c, x)) < 1e-8);
  }
}

TEST_CASE("weights of every rule sum to zero") {
  const GapSet gaps = GapSet::from_values({1.0, 3.0, 4.0});
  const auto d = default_shifts(gaps);
  CHECK(std::abs(symmetric_rule(gaps, d).weight_sum()) < 1e-12);
  const std::array<double, 3> g3{1.0, 3.0, 4.0};
  CHECK(std::abs(closed_s3(g3, std::array<double, 3>{d[0], d[1], d[2]}).weight_sum()) <
        1e-12);
  const std::array<double, 3> tri{0.4, -1.3, 0.0};
  CHECK(std::abs(triangulation_s1(2.0, tri).weight_sum()) < 1e-12);
  const std::vector<double> stencil{0.0, 0.3, -0.3, 0.9, -0.9, 1.4, -1.4};
  CHECK(std::abs(triangulation_general(gaps, stencil, 0.7).weight_sum()) < 1e-9);
}

TEST_CASE("shifts are periodic in 4pi/gap") {
  const double g = 2.0;
  const ShiftRule a = closed_s1(g, 0.7);
  const ShiftRule b = closed_s1(g, 0.7 + 4 * kPi / g);
  CHECK(b.terms[0].weight == doctest::Approx(a.terms[0].weight).epsilon(1e-12));
}

TEST_CASE("a rule for a subset of the gaps is not exact") {
  std::mt19937_64 rng(35);
  const Circuit c = random_circuit(fsim().generator("theta").generator,
                                   random_hermitian(4, rng), rng);
  const ShiftRule partial = closed_s1(2.0, kPi / 2);
  CHECK_FALSE(gap_mismatch(c, partial).empty());
  double worst = 0.0;
  for (double x : {-1.0, 0.2, 1.3}) {
    worst = std::max(worst, std::abs(evaluate_rule(c, x, partial) -
                                     exact_derivative(c, x)));
  }
  CHECK(worst > 1e-3);

  const std::array<double, 2> gaps{2.0, 4.0};
  const std::array<double, 2> shifts{kPi / 8, 3 * kPi / 8};
  const ShiftRule full = closed_s2(gaps, shifts);
  CHECK(gap_mismatch(c, full).empty());
}

TEST_CASE("default shifts") {
  SUBCASE("single gap") {
    const auto d = default_shifts(GapSet::from_values({2.0}));
    REQUIRE(d.size() == 1);
    CHECK(d[0] == doctest::Approx(kPi / 4));
  }
  SUBCASE("two gaps") {
    const GapSet gaps = GapSet::from_values({2.0, 4.0});
    const auto d = default_shifts(gaps);
    CHECK(d == std::vector<double>{kPi / 8, 3 * kPi / 8});
    CHECK(SineSystem::build(d, gaps.gaps).condition_number() < 1e6);
  }
  SUBCASE("conditioning below the warning level") {
    for (const auto &g : std::vector<std::vector<double>>{{1, 3, 4}, {2, 4, 6, 8}}) {
      const GapSet gaps = GapSet::from_values(g);
      const auto d = default_shifts(gaps);
      CHECK(SineSystem::build(d, gaps.gaps).condition_number() < 1e6);
    }
  }
  SUBCASE("too many gaps") {
    CHECK(code_of([] {
            default_shifts(GapSet::from_values({2, 4, 6, 8, 10, 12}));
          }) == ErrorCode::ShiftSelectionFailure);
  }
}

TEST_CASE("real symmetric stencil is equally spaced") {
  const auto d = real_symmetric_shifts(GapSet::from_values({2, 4, 6}));
  REQUIRE(d.size() == 4);
  CHECK(d[0] == 0.0);
  for (std::size_t l = 1; l < d.size(); ++l) {
    CHECK(d[l] - d[l - 1] == doctest::Approx(kPi / 4));
  }
}

TEST_CASE("error paths") {
  const GapSet one = GapSet::from_values({2.0});
  const GapSet two = GapSet::from_values({2.0, 4.0});
  CHECK(code_of([] { closed_s1(2.0, 0.0); }) == ErrorCode::SingularShift);
  CHECK(code_of([] { closed_s1(2.0, kPi); }) == ErrorCode::SingularShift);
  CHECK(code_of([&] { symmetric_rule(two, std::array<double, 2>{0.5, 0.5}); }) ==
        ErrorCode::SingularSystem);
  CHECK(code_of([&] { symmetric_rule(two, std::array<double, 1>{0.5}); }) ==
        ErrorCode::InvalidArgument);
  const std::array<double, 2> g2{2.0, 4.0};
  const std::array<double, 3> g3{1.0, 3.0, 4.0};
  CHECK(code_of([&] { closed_s2(g2, std::array<double, 2>{0.5, 0.5}); }) ==
        ErrorCode::SingularShiftPair);
  CHECK(code_of([&] { closed_s3(g3, std::array<double, 3>{0.5, 0.5, 0.9}); }) ==
        ErrorCode::SingularStencil);
  CHECK(code_of([] { triangulation_s1(2.0, std::array<double, 3>{0.5, 0.5, 0.0}); }) ==
        ErrorCode::DegenerateStencil);
  CHECK(code_of([&] {
          triangulation_general(one, std::array<double, 2>{kPi / 2, -kPi / 2});
        }) == ErrorCode::InsufficientStencils);
  CHECK(code_of([&] {
          triangulation_general(one, std::array<double, 4>{0.1, 0.2, 0.3, 0.4});
        }) == ErrorCode::InvalidArgument);
  CHECK(code_of([&] {
          triangulation_general(one, std::array<double, 3>{0.1, 0.1, 0.3});
        }) == ErrorCode::DegenerateStencil);
  CHECK(code_of([&] {
          real_symmetric_rule(two, std::array<double, 2>{0.0, 0.4});
        }) == ErrorCode::InsufficientStencils);
}

TEST_CASE("point-dependent rules are re-solved at the evaluation point") {
  const GapSet gaps = GapSet::from_values({2.0, 4.0});
  const std::vector<double> stencil{0.0, 0.3, -0.3, 0.9, -0.9};
  const ShiftRule at0 = apply_chain(triangulation_general(gaps, stencil, 0.0), 2.5);
  REQUIRE(at0.anchor.has_value());
  const ShiftRule moved = rule_at(at0, 1.1);
  CHECK(*moved.anchor == 1.1);
  CHECK(moved.chain_factor == 2.5);
  const ShiftRule direct = triangulation_general(gaps, stencil, 1.1);
  check_same_weights(moved, direct, 0.0);

  const ShiftRule sym = symmetric_rule(gaps, default_shifts(gaps));
  check_same_weights(rule_at(sym, 1.1), sym, 0.0);
}

TEST_CASE("chain factor scales the contraction") {
  const ShiftRule r = apply_chain(closed_s1(2.0, kPi / 2), 3.0);
  const std::array<double, 2> values{1.0, -1.0};
  CHECK(r.contract(values) == doctest::Approx(3.0));
  CHECK(code_of([&] { apply_chain(r, std::nan("")); }) == ErrorCode::InvalidArgument);
}

}
