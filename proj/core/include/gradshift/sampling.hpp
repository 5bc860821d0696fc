#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string_view>
#include <vector>

#include "gradshift/rules.hpp"
#include "gradshift/sim.hpp"

namespace gradshift {

/// Deterministic child seed for stream `index` of `master` (splitmix64).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Measurement statistics of C on the circuit output at a given point.
struct OutcomeDistribution {
  std::vector<double> values;        // eigenvalues of C
  std::vector<double> probabilities; // |<c_k|psi(x)>|^2

  double mean() const;
  double variance() const;
};

OutcomeDistribution outcome_distribution(const Circuit &circuit, double x);

/// Multinomial counts via sequential conditional binomials.
std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs,
                                              std::uint64_t shots,
                                              std::mt19937_64 &rng);

/// Mean of `shots` projective measurements of C. Deterministic given seed.
double sample_expectation(const Circuit &circuit, double x, std::uint64_t shots,
                          std::uint64_t seed);

struct TermEstimate {
  double shift = 0.0;
  double weight = 0.0;
  double estimate = 0.0;
  std::uint64_t shots = 0;
};

struct DerivativeEstimate {
  double value = 0.0;
  std::vector<TermEstimate> per_term;
  /// sum_i (chain * w_i)^2 sigma_i^2 / shots with exact per-shift sigma^2.
  double analytic_variance = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t shots_per_term = 0;
  double chain_factor = 1.0;
};

/// Each term is sampled from its own stream derive_seed(seed, term index).
DerivativeEstimate estimate_derivative(const Circuit &circuit, double x,
                                       const ShiftRule &rule,
                                       std::uint64_t shots_per_term,
                                       std::uint64_t seed);

/// Var[f'] = sum_i (chain * w_i)^2 sigma^2(shift_i) / shots.
double analytic_variance(const ShiftRule &rule, double sigma0_sq = 1.0,
                         std::uint64_t shots = 1);
double analytic_variance(const ShiftRule &rule,
                         const std::function<double(double)> &sigma_sq_at_shift,
                         std::uint64_t shots = 1);

/// Sample variance (n-1 denominator) of estimate_derivative over
/// `repetitions` runs seeded with derive_seed(seed, rep). repetitions >= 100.
double empirical_variance(const Circuit &circuit, double x,
                          const ShiftRule &rule, std::uint64_t shots,
                          std::uint64_t repetitions, std::uint64_t seed);

/// Mean and sample variance from the same Monte Carlo run.
struct MonteCarloSummary {
  double mean = 0.0;
  double variance = 0.0;
  std::uint64_t repetitions = 0;
};
MonteCarloSummary monte_carlo_derivative(const Circuit &circuit, double x,
                                         const ShiftRule &rule,
                                         std::uint64_t shots,
                                         std::uint64_t repetitions,
                                         std::uint64_t seed);

// Variance landscapes under the constant-sigma model.

enum class GridFamily {
  SymmetricS1,     // 1-D, closed S=1 rule over one symmetric shift
  TriangulationS1, // 2-D, three-shift S=1 rule with the third shift fixed
  SymmetricS2,     // 2-D, closed S=2 rule over two symmetric shifts
};

std::string_view to_string(GridFamily family) noexcept;
GridFamily parse_grid_family(std::string_view name);

struct GridAxis {
  double start = 0.0;
  double stop = 0.0;
  int points = 0;

  std::vector<double> values() const;
  double step() const;
};

struct GridSpec {
  GridFamily family = GridFamily::SymmetricS1;
  std::vector<double> gaps;
  GridAxis axis1;
  std::optional<GridAxis> axis2;
  double fixed_shift = 0.0; // third stencil for TriangulationS1
  double sigma0_sq = 1.0;
  double mask_above = 8.0;
};

struct VarianceGrid {
  GridFamily family = GridFamily::SymmetricS1;
  std::vector<double> gaps;
  std::vector<double> axis1;
  std::vector<double> axis2; // empty for 1-D grids
  /// rows follow axis1, columns axis2 (one column for 1-D). Singular and
  /// masked cells hold +inf.
  RMatrix values;
  double min_value = 0.0;
  std::size_t argmin1 = 0;
  std::size_t argmin2 = 0;

  bool is_2d() const noexcept { return !axis2.empty(); }
};

/// Variance of one grid cell; +inf when the stencil is singular.
double grid_cell_variance(const GridSpec &spec, double shift1, double shift2);

VarianceGrid variance_grid(const GridSpec &spec);

/// Presets reproducing the published landscapes: "fig2a", "fig2b", "fig3".
GridSpec grid_preset(std::string_view name);

/// CSV with header "delta,variance" or "delta1,delta2,variance"; masked cells
/// are written as "inf"; floats use 17 significant digits.
void write_grid_csv(std::ostream &out, const VarianceGrid &grid);

} // namespace gradshift
