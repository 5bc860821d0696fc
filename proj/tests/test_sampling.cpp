#include "doctest.h"

#include <array>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "gradshift/error.hpp"
#include "gradshift/gates.hpp"
#include "gradshift/sampling.hpp"
#include "support.hpp"

using namespace gradshift;

TEST_SUITE("sampling") {

TEST_CASE("derived seeds are deterministic and distinct") {
  CHECK(derive_seed(7, 3) == derive_seed(7, 3));
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 1000; ++i) {
    seen.insert(derive_seed(7, i));
  }
  CHECK(seen.size() == 1000);
  CHECK(derive_seed(7, 0) != derive_seed(8, 0));
}

TEST_CASE("multinomial counts sum to shots and track probabilities") {
  std::mt19937_64 rng(51);
  const std::array<double, 4> p{0.1, 0.2, 0.3, 0.4};
  const std::uint64_t shots = 200000;
  const auto counts = sample_multinomial(p, shots, rng);
  CHECK(std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) == shots);
  for (std::size_t k = 0; k < p.size(); ++k) {
    const double sd = std::sqrt(shots * p[k] * (1 - p[k]));
    CHECK(std::abs(static_cast<double>(counts[k]) - shots * p[k]) < 5 * sd);
  }
}

TEST_CASE("sampled expectations are reproducible") {
  std::mt19937_64 rng(52);
  const Circuit c = random_circuit(pauli_string("Z"), random_hermitian(2, rng), rng);
  CHECK(sample_expectation(c, 0.3, 1000, 9) == sample_expectation(c, 0.3, 1000, 9));
  CHECK(sample_expectation(c, 0.3, 1000, 9) != sample_expectation(c, 0.3, 1000, 10));
}

TEST_CASE("outcome distribution mean is the exact expectation") {
  std::mt19937_64 rng(53);
  const Circuit c = random_circuit(random_hermitian(3, rng), random_hermitian(3, rng), rng);
  const OutcomeDistribution d = outcome_distribution(c, 0.8);
  CHECK(d.mean() == doctest::Approx(expectation(c, 0.8)).epsilon(1e-12));
  CHECK(std::accumulate(d.probabilities.begin(), d.probabilities.end(), 0.0) ==
        doctest::Approx(1.0));
  CHECK(d.variance() >= 0.0);
}

TEST_CASE("derivative estimates use one stream per term") {
  std::mt19937_64 rng(54);
  const Circuit c = random_circuit(fsim().generator("theta").generator,
                                   random_hermitian(4, rng), rng);
  const ShiftRule r = closed_s2(std::array<double, 2>{2.0, 4.0},
                                std::array<double, 2>{kPi / 8, 3 * kPi / 8});
  const auto a = estimate_derivative(c, 0.4, r, 500, 7);
  const auto b = estimate_derivative(c, 0.4, r, 500, 7);
  CHECK(a.value == b.value);
  REQUIRE(a.per_term.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(a.per_term[i].estimate ==
          sample_expectation(c, 0.4 + r.terms[i].shift, 500, derive_seed(7, i)));
  }
}

TEST_CASE("analytic variance under constant noise") {
  const ShiftRule psr = closed_s1(2.0, kPi / 2);
  CHECK(analytic_variance(psr) == doctest::Approx(0.5));
  CHECK(analytic_variance(psr, 2.0, 100) == doctest::Approx(0.01));
  CHECK(analytic_variance(apply_chain(psr, 3.0)) == doctest::Approx(4.5));
  CHECK_THROWS_AS(analytic_variance(psr, 1.0, 0), Error);
}

TEST_CASE("empirical variance follows the analytic prediction") {
  std::mt19937_64 rng(55);
  const Circuit c = random_circuit(pauli_string("Z"), random_hermitian(2, rng), rng);
  const ShiftRule psr = closed_s1(2.0, kPi / 2);
  const auto mc = monte_carlo_derivative(c, 0.2, psr, 50, 4000, 3);
  const double predicted = estimate_derivative(c, 0.2, psr, 50, 3).analytic_variance;
  CHECK(std::abs(mc.variance - predicted) / predicted < 0.1);
  CHECK(std::abs(mc.mean - exact_derivative(c, 0.2)) <
        4 * std::sqrt(mc.variance / 4000));
  CHECK_THROWS_AS(monte_carlo_derivative(c, 0.2, psr, 50, 99, 3), Error);
}

TEST_CASE("grid symmetries") {
  SUBCASE("one-gap landscape is symmetric about pi") {
    const VarianceGrid g = variance_grid(grid_preset("fig2a"));
    const auto n = g.axis1.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double a = g.values(static_cast<Eigen::Index>(i), 0);
      const double b = g.values(static_cast<Eigen::Index>(n - 1 - i), 0);
      if (std::isfinite(a)) {
        CHECK(a == doctest::Approx(b).epsilon(1e-9));
      }
    }
  }
  SUBCASE("two-gap landscape is symmetric under exchanging the shifts") {
    const VarianceGrid g = variance_grid(grid_preset("fig3"));
    for (Eigen::Index i = 0; i < g.values.rows(); i += 7) {
      for (Eigen::Index j = 0; j < g.values.cols(); j += 5) {
        const double a = g.values(i, j);
        if (std::isfinite(a)) {
          CHECK(a == doctest::Approx(g.values(j, i)).epsilon(1e-9));
        }
      }
    }
  }
}

TEST_CASE("variance diverges near singular stencils") {
  GridSpec spec = grid_preset("fig2a");
  CHECK(grid_cell_variance(spec, 1e-4, 0.0) > 1e6);
  CHECK(std::isinf(grid_cell_variance(spec, 0.0, 0.0)));
  const VarianceGrid g = variance_grid(spec);
  CHECK(std::isinf(g.values(0, 0)));  // masked above the display limit
}

TEST_CASE("grid presets") {
  const VarianceGrid a = variance_grid(grid_preset("fig2a"));
  CHECK(a.min_value == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(a.axis1[a.argmin1] == doctest::Approx(kPi / 2).epsilon(1e-9));

  const VarianceGrid c = variance_grid(grid_preset("fig3"));
  CHECK(c.min_value == doctest::Approx(1.4034).epsilon(1e-3));
  CHECK_THROWS_AS(grid_preset("fig4"), Error);
}

TEST_CASE("grid csv format") {
  GridSpec spec;
  spec.family = GridFamily::SymmetricS1;
  spec.gaps = {2.0};
  spec.axis1 = {0.0, kPi / 2, 2};
  std::ostringstream out;
  write_grid_csv(out, variance_grid(spec));
  CHECK(out.str() == "delta,variance\n0,inf\n1.5707963267948966,0.5\n");

  spec.family = GridFamily::SymmetricS2;
  spec.gaps = {2.0, 4.0};
  spec.axis1 = {0.8 * kPi, 0.8 * kPi, 1};
  spec.axis2 = GridAxis{0.29 * kPi, 0.29 * kPi, 1};
  std::ostringstream out2;
  write_grid_csv(out2, variance_grid(spec));
  CHECK(out2.str().rfind("delta1,delta2,variance\n", 0) == 0);
}

TEST_CASE("grid families parse by name") {
  CHECK(parse_grid_family("triangulation-s1") == GridFamily::TriangulationS1);
  CHECK(parse_grid_family(to_string(GridFamily::SymmetricS2)) == GridFamily::SymmetricS2);
  CHECK_THROWS_AS(parse_grid_family("cubic"), Error);
}

}
