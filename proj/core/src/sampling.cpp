#include "gradshift/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>

#include "gradshift/error.hpp"

namespace gradshift {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double sample_mean(const OutcomeDistribution &dist, std::uint64_t shots,
                   std::uint64_t seed) {
  if (shots < 1) {
    throw Error(ErrorCode::InvalidArgument, "shots must be at least 1");
  }
  std::mt19937_64 rng(seed);
  const auto counts = sample_multinomial(dist.probabilities, shots, rng);
  double sum = 0.0;
  for (std::size_t k = 0; k < counts.size(); ++k) {
    sum += static_cast<double>(counts[k]) * dist.values[k];
  }
  return sum / static_cast<double>(shots);
}

// Per-term outcome statistics for one rule at one point; reused across
// Monte Carlo repetitions.
struct PreparedRule {
  ShiftRule rule;
  std::vector<OutcomeDistribution> distributions;

  PreparedRule(const Circuit &circuit, double x, const ShiftRule &input)
      : rule(rule_at(input, x)) {
    distributions.reserve(rule.terms.size());
    for (const auto &term : rule.terms) {
      distributions.push_back(outcome_distribution(circuit, x + term.shift));
    }
  }

  double variance(std::uint64_t shots) const {
    double var = 0.0;
    for (std::size_t i = 0; i < rule.terms.size(); ++i) {
      const double w = rule.chain_factor * rule.terms[i].weight;
      var += w * w * distributions[i].variance();
    }
    return var / static_cast<double>(shots);
  }

  DerivativeEstimate estimate(std::uint64_t shots, std::uint64_t seed) const {
    DerivativeEstimate out;
    out.seed = seed;
    out.shots_per_term = shots;
    out.chain_factor = rule.chain_factor;
    out.per_term.reserve(rule.terms.size());
    std::vector<double> values;
    values.reserve(rule.terms.size());
    for (std::size_t i = 0; i < rule.terms.size(); ++i) {
      const double est =
          sample_mean(distributions[i], shots, derive_seed(seed, i));
      values.push_back(est);
      out.per_term.push_back(
          {rule.terms[i].shift, rule.terms[i].weight, est, shots});
    }
    out.value = rule.contract(values);
    out.analytic_variance = variance(shots);
    return out;
  }
};

std::string format_double(double v) {
  if (std::isinf(v)) {
    return v > 0 ? "inf" : "-inf";
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(master) ^ splitmix64(index + 0x632BE59BD9B4E019ULL));
}

double OutcomeDistribution::mean() const {
  double m = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    m += probabilities[k] * values[k];
  }
  return m;
}

double OutcomeDistribution::variance() const {
  const double m = mean();
  double v = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    v += probabilities[k] * (values[k] - m) * (values[k] - m);
  }
  return v;
}

OutcomeDistribution outcome_distribution(const Circuit &circuit, double x) {
  const CVector psi = circuit.output_state(x);
  const auto &cost = circuit.cost_spectrum();
  const CVector amps = cost.eigenvectors.adjoint() * psi;
  OutcomeDistribution out;
  out.values.resize(static_cast<std::size_t>(cost.dim()));
  out.probabilities.resize(static_cast<std::size_t>(cost.dim()));
  double total = 0.0;
  for (int k = 0; k < cost.dim(); ++k) {
    out.values[static_cast<std::size_t>(k)] = cost.eigenvalues(k);
    const double p = std::norm(amps(k));
    out.probabilities[static_cast<std::size_t>(k)] = p;
    total += p;
  }
  for (auto &p : out.probabilities) {
    p /= total;
  }
  return out;
}

std::vector<std::uint64_t> sample_multinomial(std::span<const double> probs,
                                              std::uint64_t shots,
                                              std::mt19937_64 &rng) {
  std::vector<std::uint64_t> counts(probs.size(), 0);
  if (probs.empty()) {
    return counts;
  }
  std::uint64_t remaining = shots;
  double mass = 0.0;
  for (const double p : probs) {
    mass += p;
  }
  for (std::size_t k = 0; k + 1 < probs.size() && remaining > 0; ++k) {
    const double q = mass > 0.0 ? std::clamp(probs[k] / mass, 0.0, 1.0) : 0.0;
    std::uint64_t drawn = 0;
    if (q >= 1.0) {
      drawn = remaining;
    } else if (q > 0.0) {
      std::binomial_distribution<std::uint64_t> binom(remaining, q);
      drawn = binom(rng);
    }
    counts[k] = drawn;
    remaining -= drawn;
    mass -= probs[k];
  }
  counts.back() += remaining;
  return counts;
}

double sample_expectation(const Circuit &circuit, double x, std::uint64_t shots,
                          std::uint64_t seed) {
  return sample_mean(outcome_distribution(circuit, x), shots, seed);
}

DerivativeEstimate estimate_derivative(const Circuit &circuit, double x,
                                       const ShiftRule &rule,
                                       std::uint64_t shots_per_term,
                                       std::uint64_t seed) {
  return PreparedRule(circuit, x, rule).estimate(shots_per_term, seed);
}

double analytic_variance(const ShiftRule &rule, double sigma0_sq,
                         std::uint64_t shots) {
  return analytic_variance(
      rule, [sigma0_sq](double) { return sigma0_sq; }, shots);
}

double analytic_variance(const ShiftRule &rule,
                         const std::function<double(double)> &sigma_sq_at_shift,
                         std::uint64_t shots) {
  if (shots < 1) {
    throw Error(ErrorCode::InvalidArgument, "shots must be at least 1");
  }
  double var = 0.0;
  for (const auto &term : rule.terms) {
    const double w = rule.chain_factor * term.weight;
    var += w * w * sigma_sq_at_shift(term.shift);
  }
  return var / static_cast<double>(shots);
}

MonteCarloSummary monte_carlo_derivative(const Circuit &circuit, double x,
                                         const ShiftRule &rule,
                                         std::uint64_t shots,
                                         std::uint64_t repetitions,
                                         std::uint64_t seed) {
  if (repetitions < 100) {
    throw Error(ErrorCode::InvalidArgument,
                "at least 100 repetitions are required");
  }
  const PreparedRule prepared(circuit, x, rule);
  // Welford accumulation.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t r = 0; r < repetitions; ++r) {
    const double v = prepared.estimate(shots, derive_seed(seed, r)).value;
    const double delta = v - mean;
    mean += delta / static_cast<double>(r + 1);
    m2 += delta * (v - mean);
  }
  return {mean, m2 / static_cast<double>(repetitions - 1), repetitions};
}

double empirical_variance(const Circuit &circuit, double x,
                          const ShiftRule &rule, std::uint64_t shots,
                          std::uint64_t repetitions, std::uint64_t seed) {
  return monte_carlo_derivative(circuit, x, rule, shots, repetitions, seed)
      .variance;
}

std::string_view to_string(GridFamily family) noexcept {
  switch (family) {
  case GridFamily::SymmetricS1:
    return "symmetric-S1";
  case GridFamily::TriangulationS1:
    return "triangulation-S1";
  case GridFamily::SymmetricS2:
    return "symmetric-S2";
  }
  return "unknown";
}

GridFamily parse_grid_family(std::string_view name) {
  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lowered == "symmetric-s1" || lowered == "closed-s1") {
    return GridFamily::SymmetricS1;
  }
  if (lowered == "triangulation-s1") {
    return GridFamily::TriangulationS1;
  }
  if (lowered == "symmetric-s2" || lowered == "closed-s2") {
    return GridFamily::SymmetricS2;
  }
  throw Error(ErrorCode::ParseError,
              "unknown grid family \"" + std::string(name) + "\"");
}

std::vector<double> GridAxis::values() const {
  std::vector<double> out(static_cast<std::size_t>(std::max(points, 0)));
  for (int i = 0; i < points; ++i) {
    out[static_cast<std::size_t>(i)] =
        points == 1 ? start : start + (stop - start) * i / (points - 1);
  }
  return out;
}

double GridAxis::step() const {
  return points > 1 ? (stop - start) / (points - 1) : 0.0;
}

double grid_cell_variance(const GridSpec &spec, double shift1, double shift2) {
  try {
    ShiftRule rule;
    switch (spec.family) {
    case GridFamily::SymmetricS1:
      rule = closed_s1(spec.gaps.at(0), shift1);
      break;
    case GridFamily::TriangulationS1: {
      const double shifts[3] = {shift1, shift2, spec.fixed_shift};
      rule = triangulation_s1(spec.gaps.at(0), shifts);
      break;
    }
    case GridFamily::SymmetricS2: {
      const double gaps[2] = {spec.gaps.at(0), spec.gaps.at(1)};
      const double shifts[2] = {shift1, shift2};
      rule = closed_s2(gaps, shifts);
      break;
    }
    }
    return analytic_variance(rule, spec.sigma0_sq);
  } catch (const Error &e) {
    if (is_input_error(e.code())) {
      throw;
    }
    return kInf;
  }
}

VarianceGrid variance_grid(const GridSpec &spec) {
  const bool two_d = spec.family != GridFamily::SymmetricS1;
  const std::size_t gaps_needed =
      spec.family == GridFamily::SymmetricS2 ? 2 : 1;
  if (spec.gaps.size() != gaps_needed) {
    throw Error(ErrorCode::InvalidArgument,
                std::string(to_string(spec.family)) + " grid needs " +
                    std::to_string(gaps_needed) + " gap(s)");
  }
  if (spec.axis1.points < 1 || (two_d && (!spec.axis2 || spec.axis2->points < 1))) {
    throw Error(ErrorCode::InvalidArgument, "grid axes need at least one point");
  }

  VarianceGrid grid;
  grid.family = spec.family;
  grid.gaps = spec.gaps;
  grid.axis1 = spec.axis1.values();
  if (two_d) {
    grid.axis2 = spec.axis2->values();
  }
  const std::size_t cols = two_d ? grid.axis2.size() : 1;
  grid.values.resize(static_cast<Eigen::Index>(grid.axis1.size()),
                     static_cast<Eigen::Index>(cols));

  grid.min_value = kInf;
  for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      double v = grid_cell_variance(spec, grid.axis1[i],
                                    two_d ? grid.axis2[j] : 0.0);
      if (v > spec.mask_above) {
        v = kInf;
      }
      grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      grid.min_value = std::min(grid.min_value, v);
    }
  }
  // First cell (row-major) that attains the minimum up to rounding.
  const double tie = grid.min_value + 1e-12 * std::max(1.0, grid.min_value);
  bool found = false;
  for (std::size_t i = 0; i < grid.axis1.size() && !found; ++i) {
    for (std::size_t j = 0; j < cols; ++j) {
      if (grid.values(static_cast<Eigen::Index>(i),
                      static_cast<Eigen::Index>(j)) <= tie) {
        grid.argmin1 = i;
        grid.argmin2 = j;
        found = true;
        break;
      }
    }
  }
  return grid;
}

GridSpec grid_preset(std::string_view name) {
  GridSpec spec;
  if (name == "fig2a") {
    spec.family = GridFamily::SymmetricS1;
    spec.gaps = {2.0};
    spec.axis1 = {0.01 * kPi, 1.99 * kPi, 199};
  } else if (name == "fig2b") {
    spec.family = GridFamily::TriangulationS1;
    spec.gaps = {2.0};
    spec.axis1 = {-2.0 * kPi, 2.0 * kPi, 401};
    spec.axis2 = GridAxis{-2.0 * kPi, 2.0 * kPi, 401};
    spec.fixed_shift = 0.0;
  } else if (name == "fig3") {
    spec.family = GridFamily::SymmetricS2;
    spec.gaps = {2.0, 4.0};
    spec.axis1 = {0.0, kPi, 201};
    spec.axis2 = GridAxis{0.0, kPi, 201};
  } else {
    throw Error(ErrorCode::ParseError,
                "unknown preset \"" + std::string(name) +
                    "\" (expected fig2a, fig2b or fig3)");
  }
  return spec;
}

void write_grid_csv(std::ostream &out, const VarianceGrid &grid) {
  if (grid.is_2d()) {
    out << "delta1,delta2,variance\n";
    for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
      for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
        out << format_double(grid.axis1[i]) << ','
            << format_double(grid.axis2[j]) << ','
            << format_double(grid.values(static_cast<Eigen::Index>(i),
                                         static_cast<Eigen::Index>(j)))
            << '\n';
      }
    }
  } else {
    out << "delta,variance\n";
    for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
      out << format_double(grid.axis1[i]) << ','
          << format_double(grid.values(static_cast<Eigen::Index>(i), 0))
          << '\n';
    }
  }
}

} // namespace gradshift
