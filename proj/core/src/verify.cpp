#include "gradshift/verify.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>

#include "gradshift/error.hpp"
#include "gradshift/gates.hpp"
#include "gradshift/rules.hpp"
#include "gradshift/sampling.hpp"
#include "gradshift/sim.hpp"
#include "gradshift/spectral.hpp"

namespace gradshift {
namespace {

using Mutation = VerifyOptions::Mutation;

struct Outcome {
  bool passed = false;
  std::string detail;
};

struct CheckDef {
  std::string id;
  std::string name;
  std::vector<std::string> tags;
  double budget_seconds = 0.0; // 0 means no runtime limit
  std::function<Outcome(const VerifyOptions &)> run;
};

std::string fmt(const char *pattern, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, a);
  return buf;
}

std::string sci(double v) { return fmt("%.3e", v); }

double uniform(std::mt19937_64 &rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

ShiftRule make_closed_s2(const VerifyOptions &options,
                         const std::array<double, 2> &gaps,
                         const std::array<double, 2> &shifts) {
  ShiftRule rule = closed_s2(gaps, shifts);
  if (options.mutation == Mutation::FlipClosedS2Sign) {
    rule.terms.front().weight = -rule.terms.front().weight;
  }
  return rule;
}

double max_weight_difference(const ShiftRule &a, const ShiftRule &b) {
  if (a.terms.size() != b.terms.size()) {
    return std::numeric_limits<double>::infinity();
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    if (std::abs(a.terms[i].shift - b.terms[i].shift) > 1e-15) {
      return std::numeric_limits<double>::infinity();
    }
    worst = std::max(worst, std::abs(a.terms[i].weight - b.terms[i].weight));
  }
  return worst;
}

double rule_error(const Circuit &circuit, double x, const ShiftRule &rule) {
  return std::abs(evaluate_rule(circuit, x, rule) - exact_derivative(circuit, x));
}

CMatrix fsim_phase(const char *parameter, double value) {
  return generator_unitary(fsim().generator(parameter).generator, value);
}

// Haar V, then the commuting fSim factor for `fixed`, then `generator`.
Circuit fsim_circuit(const char *varied, const char *fixed, double fixed_value,
                     std::mt19937_64 &rng) {
  CircuitSpec spec;
  spec.initial_state = StateVector::basis(4);
  spec.pre = fsim_phase(fixed, fixed_value) * random_unitary(4, rng);
  spec.generator = fsim().generator(varied).generator;
  spec.post = random_unitary(4, rng);
  spec.cost = random_hermitian(4, rng);
  return Circuit(std::move(spec));
}

bool gaps_equal(const GapSet &gaps, const std::vector<double> &expected,
                double tol) {
  if (gaps.size() != expected.size()) {
    return false;
  }
  for (std::size_t s = 0; s < expected.size(); ++s) {
    if (std::abs(gaps.gaps[s] - expected[s]) > tol) {
      return false;
    }
  }
  return true;
}

std::string gaps_text(const GapSet &gaps) {
  std::string out = "[";
  for (std::size_t s = 0; s < gaps.size(); ++s) {
    out += (s ? ", " : "") + fmt("%.12g", gaps.gaps[s]);
  }
  return out + "]";
}

Outcome check_psr(const VerifyOptions &options) {
  const ShiftRule rule = symmetric_rule(GapSet::from_values({2.0}),
                                        std::array<double, 1>{kPi / 2});
  const bool exact_weights = rule.terms.size() == 2 &&
                             rule.terms[0].weight == 0.5 &&
                             rule.terms[1].weight == -0.5;
  std::mt19937_64 rng(derive_seed(options.seed, 1));
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int qubits = 1 + trial % 3;
    std::string pauli(static_cast<std::size_t>(qubits), 'I');
    pauli[static_cast<std::size_t>(rng() % static_cast<unsigned>(qubits))] = 'Z';
    const Circuit circuit = random_circuit(
        pauli_string(pauli), random_hermitian(1 << qubits, rng), rng);
    worst = std::max(worst, rule_error(circuit, uniform(rng, -kPi, kPi), rule));
  }
  return {exact_weights && worst < 1e-10,
          std::string("weights ") + (exact_weights ? "exactly +-1/2" : "not +-1/2") +
              "; max |rule - exact| over 200 circuits = " + sci(worst)};
}

Outcome check_fsim_theta(const VerifyOptions &options) {
  const std::array<double, 2> gaps{2.0, 4.0};
  const GapSet gapset = GapSet::from_values({2.0, 4.0});
  std::mt19937_64 rng(derive_seed(options.seed, 2));

  double worst_weights = 0.0;
  const std::vector<std::array<double, 2>> stencils = {
      {0.80 * kPi, 0.29 * kPi}, {kPi / 8, 3 * kPi / 8}, {0.3, 1.1}};
  for (const auto &shifts : stencils) {
    worst_weights = std::max(
        worst_weights,
        max_weight_difference(make_closed_s2(options, gaps, shifts),
                              symmetric_rule(gapset, shifts)));
  }

  const ShiftRule rule = make_closed_s2(options, gaps, {kPi / 8, 3 * kPi / 8});
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = uniform(rng, -kPi, kPi);
    const double phi = uniform(rng, -kPi, kPi);
    const Circuit circuit = fsim_circuit("theta", "phi", phi, rng);
    worst = std::max(worst, rule_error(circuit, theta, rule));
  }
  return {worst < 1e-9 && worst_weights < 1e-12,
          "max |rule - exact| = " + sci(worst) +
              "; max |closed - general| weight = " + sci(worst_weights)};
}

Outcome check_fsim_phi(const VerifyOptions &options) {
  const GapSet gaps = unique_gaps(diagonalize(fsim().generator("phi").generator));
  const bool gaps_ok = gaps_equal(gaps, {2.0}, 1e-9);
  const ShiftRule rule = symmetric_rule(gaps, default_shifts(gaps));
  std::mt19937_64 rng(derive_seed(options.seed, 3));
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const double theta = uniform(rng, -kPi, kPi);
    const double phi = uniform(rng, -kPi, kPi);
    const Circuit circuit = fsim_circuit("phi", "theta", theta, rng);
    worst = std::max(worst, rule_error(circuit, phi, rule));
  }
  return {gaps_ok && rule.terms.size() == 2 && worst < 1e-9,
          "gaps " + gaps_text(gaps) + "; " + std::to_string(rule.terms.size()) +
              " evaluations; max |rule - exact| = " + sci(worst)};
}

Outcome check_cross_resonance(const VerifyOptions &options) {
  const GateDescriptor gate = cross_resonance({1.0, -0.5, 1.0, 0.0, 0.0});
  const HermitianOperator &generator = gate.generators.front().generator;
  const GapSet gaps = unique_gaps(diagonalize(generator));
  if (!gaps_equal(gaps, {1.0, 3.0, 4.0}, 1e-9)) {
    return {false, "gaps " + gaps_text(gaps) + ", expected [1, 3, 4]"};
  }
  const std::array<double, 3> g{gaps.gaps[0], gaps.gaps[1], gaps.gaps[2]};
  const std::vector<double> shifts = default_shifts(gaps);
  const std::array<double, 3> d{shifts[0], shifts[1], shifts[2]};
  const ShiftRule rule = closed_s3(g, d);
  const double weight_diff =
      max_weight_difference(rule, symmetric_rule(gaps, shifts));

  std::mt19937_64 rng(derive_seed(options.seed, 4));
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const Circuit circuit =
        random_circuit(generator, random_hermitian(4, rng), rng);
    worst = std::max(worst, rule_error(circuit, uniform(rng, -kPi, kPi), rule));
  }
  return {weight_diff < 1e-12 && worst < 1e-9,
          "gaps " + gaps_text(gaps) + "; max |closed - general| weight = " +
              sci(weight_diff) + "; max |rule - exact| = " + sci(worst)};
}

Outcome check_triangulation(const VerifyOptions &options) {
  std::mt19937_64 rng(derive_seed(options.seed, 5));
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const std::array<double, 3> shifts{uniform(rng, 0.3, 2.8),
                                       uniform(rng, -2.8, -0.3), 0.0};
    const ShiftRule rule = triangulation_s1(2.0, shifts);
    const Circuit circuit =
        random_circuit(pauli_string("Z"), random_hermitian(2, rng), rng);
    worst = std::max(worst, rule_error(circuit, uniform(rng, -kPi, kPi), rule));
  }

  bool insufficient = false;
  try {
    triangulation_general(GapSet::from_values({2.0}),
                          std::array<double, 2>{kPi / 2, -kPi / 2});
  } catch (const Error &e) {
    insufficient = e.code() == ErrorCode::InsufficientStencils;
  }
  return {worst < 1e-9 && insufficient,
          "max |rule - exact| = " + sci(worst) + "; two stencils " +
              (insufficient ? "rejected with InsufficientStencils"
                            : "not rejected")};
}

Outcome check_feature_map(const VerifyOptions &options) {
  std::mt19937_64 rng(derive_seed(options.seed, 6));
  double worst = 0.0;
  std::string counts;
  bool sizes_ok = true;
  for (int n = 2; n <= 4; ++n) {
    const GateDescriptor gate = product_feature_map(n, PauliAxis::Z);
    const ParameterGenerator &pg = gate.generators.front();
    const GapSet &gaps = pg.expected_gaps;
    const std::vector<double> stencil = real_symmetric_shifts(gaps);
    const ShiftRule symmetric = symmetric_rule(gaps, default_shifts(gaps));

    for (int trial = 0; trial < 30; ++trial) {
      const int d = gate.dim;
      CircuitSpec spec;
      spec.initial_state = StateVector::basis(d);
      spec.pre = random_orthogonal(d, rng);
      spec.generator = pg.generator;
      spec.post = random_orthogonal(d, rng);
      spec.cost = random_real_symmetric(d, rng);
      const Circuit circuit(std::move(spec));
      const double x = uniform(rng, -kPi, kPi);
      const ShiftRule reduced = real_symmetric_rule(gaps, stencil, x);
      sizes_ok = sizes_ok &&
                 reduced.terms.size() == static_cast<std::size_t>(n + 1) &&
                 symmetric.terms.size() == static_cast<std::size_t>(2 * n);
      const double exact = exact_derivative(circuit, x);
      const double r = evaluate_rule(circuit, x, reduced);
      const double s = evaluate_rule(circuit, x, symmetric);
      worst = std::max({worst, std::abs(r - exact), std::abs(r - s)});
    }
    counts += (counts.empty() ? "" : ", ") + std::string("N=") +
              std::to_string(n) + ": " + std::to_string(n + 1) + " vs " +
              std::to_string(2 * n);
  }
  return {sizes_ok && worst < 1e-9,
          "evaluations " + counts + "; max deviation = " + sci(worst)};
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

Outcome check_landscapes(const VerifyOptions &) {
  std::string detail;
  bool ok = true;

  const VarianceGrid a = variance_grid(grid_preset("fig2a"));
  const double step_a = a.axis1[1] - a.axis1[0];
  const double arg_a = a.axis1[a.argmin1];
  const bool ok_a = near(arg_a, kPi / 2, step_a + 1e-12) &&
                    near(a.min_value, 0.5, 5e-4);
  ok = ok && ok_a;
  detail += "2a min " + fmt("%.4f", a.min_value) + " at " +
            fmt("%.3fpi", arg_a / kPi);

  const VarianceGrid b = variance_grid(grid_preset("fig2b"));
  const double step_b = b.axis1[1] - b.axis1[0];
  auto index_of = [&](const std::vector<double> &axis, double v) {
    const auto it = std::min_element(axis.begin(), axis.end(), [&](double l, double r) {
      return std::abs(l - v) < std::abs(r - v);
    });
    return static_cast<Eigen::Index>(it - axis.begin());
  };
  int minima = 0;
  bool combos_ok = true;
  for (const double s1 : {kPi / 2, -kPi / 2}) {
    for (const double s2 : {3 * kPi / 2, -3 * kPi / 2}) {
      // (pi/2, -3pi/2) and (-pi/2, 3pi/2) coincide modulo 2pi and are
      // singular; the other two combinations, and their mirror images, are
      // the minima.
      const bool coincident = near(std::remainder(s1 - s2, 2 * kPi), 0.0, 1e-9);
      for (const auto &[u, v] : {std::pair{s1, s2}, std::pair{s2, s1}}) {
        const double value = b.values(index_of(b.axis1, u), index_of(b.axis2, v));
        if (coincident) {
          combos_ok = combos_ok && !std::isfinite(value);
        } else {
          combos_ok = combos_ok && near(value, 0.5, 1e-9);
          ++minima;
        }
      }
    }
  }
  const bool ok_b = combos_ok && minima == 4 && near(b.min_value, 0.5, 1e-9);
  ok = ok && ok_b;
  detail += "; 2b min " + fmt("%.4f", b.min_value) + ", " +
            std::to_string(minima) + " minima at (+-pi/2, +-3pi/2) combos" +
            (combos_ok ? "" : " (mismatch)") + fmt(", step %.3fpi", step_b / kPi);

  const VarianceGrid c = variance_grid(grid_preset("fig3"));
  const double c1 = c.axis1[c.argmin1];
  const double c2 = c.axis2[c.argmin2];
  const double hi = std::max(c1, c2);
  const double lo = std::min(c1, c2);
  const bool ok_c = near(hi, 0.80 * kPi, 0.02 * kPi) &&
                    near(lo, 0.29 * kPi, 0.02 * kPi) &&
                    near(c.min_value, 1.40, 0.02);
  ok = ok && ok_c;
  detail += "; 3 min " + fmt("%.4f", c.min_value) + " at (" +
            fmt("%.3fpi", c1 / kPi) + ", " + fmt("%.3fpi", c2 / kPi) + ")";
  return {ok, detail};
}

struct SamplingCase {
  std::string label;
  Circuit circuit;
  double x;
  ShiftRule rule;
};

Outcome check_sampling(const VerifyOptions &options) {
  std::mt19937_64 rng(derive_seed(options.seed, 8));
  std::vector<SamplingCase> cases;
  {
    Circuit c = random_circuit(pauli_string("Z"), random_hermitian(2, rng), rng);
    cases.push_back({"psr", std::move(c), 0.7,
                     symmetric_rule(GapSet::from_values({2.0}),
                                    std::array<double, 1>{kPi / 2})});
  }
  {
    Circuit c = fsim_circuit("theta", "phi", 0.4, rng);
    cases.push_back({"fsim", std::move(c), -1.1,
                     make_closed_s2(options, {2.0, 4.0},
                                    {0.80 * kPi, 0.29 * kPi})});
  }

  constexpr std::uint64_t kShots = 100;
  constexpr std::uint64_t kReps = 10000;
  bool ok = true;
  std::string detail;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    const auto &sc = cases[k];
    const std::uint64_t seed = derive_seed(options.seed, 800 + k);
    const MonteCarloSummary mc =
        monte_carlo_derivative(sc.circuit, sc.x, sc.rule, kShots, kReps, seed);
    const double analytic =
        estimate_derivative(sc.circuit, sc.x, sc.rule, kShots, seed)
            .analytic_variance;
    const double exact = exact_derivative(sc.circuit, sc.x);
    const double rel = std::abs(mc.variance - analytic) / analytic;
    const double z = std::abs(mc.mean - exact) /
                     std::sqrt(mc.variance / static_cast<double>(kReps));
    ok = ok && rel < 0.10 && z < 4.0;
    detail += (detail.empty() ? "" : "; ") + sc.label + ": variance " +
              sci(mc.variance) + " vs " + sci(analytic) + " (" +
              fmt("%.1f%%", 100 * rel) + "), mean " + fmt("%.2f", z) + " SE off";
  }
  return {ok, detail};
}

Outcome check_qutrit_gaps(const VerifyOptions &) {
  bool ok = true;
  std::string detail;
  for (const auto &gate : qutrit_generators()) {
    const GapSet gaps = unique_gaps(diagonalize(gate.generators.front().generator));
    ok = ok && gaps_equal(gaps, {1.0, 2.0}, 1e-9);
    detail += (detail.empty() ? "" : "; ") + gate.name + " gaps " + gaps_text(gaps);
  }
  return {ok, detail};
}

Outcome check_qutrit_exact(const VerifyOptions &options) {
  std::mt19937_64 rng(derive_seed(options.seed, 9));
  const GapSet gaps = GapSet::from_values({1.0, 2.0});
  const std::vector<double> d = default_shifts(gaps);
  const ShiftRule rule = make_closed_s2(options, {1.0, 2.0}, {d[0], d[1]});
  double worst = 0.0;
  for (const auto &gate : qutrit_generators()) {
    for (int trial = 0; trial < 50; ++trial) {
      const Circuit circuit = random_circuit(gate.generators.front().generator,
                                             random_hermitian(3, rng), rng);
      worst = std::max(worst, rule_error(circuit, uniform(rng, -kPi, kPi), rule));
    }
  }
  return {worst < 1e-9, "max |rule - exact| = " + sci(worst)};
}

GridSpec qutrit_grid() {
  GridSpec spec;
  spec.family = GridFamily::SymmetricS2;
  spec.gaps = {1.0, 2.0};
  spec.axis1 = {0.0, 2.0 * kPi, 201};
  spec.axis2 = GridAxis{0.0, 2.0 * kPi, 201};
  return spec;
}

std::string location_text(const VarianceGrid &g) {
  return fmt("(%.3fpi, ", g.axis1[g.argmin1] / kPi) +
         fmt("%.3fpi)", g.axis2[g.argmin2] / kPi) + " min " +
         fmt("%.4f", g.min_value);
}

bool argmin_near(const VarianceGrid &g, double hi, double lo, double tol) {
  const double a = g.axis1[g.argmin1];
  const double b = g.axis2[g.argmin2];
  return near(std::max(a, b), hi, tol) && near(std::min(a, b), lo, tol);
}

Outcome check_qutrit_location(const VerifyOptions &) {
  const VarianceGrid g = variance_grid(qutrit_grid());
  const bool ok = argmin_near(g, 0.80 * kPi, 0.29 * kPi, 0.02 * kPi);
  return {ok, "qutrit argmin " + location_text(g) +
                  "; expected |0.80pi|, |0.29pi| within 0.02pi"};
}

Outcome check_qutrit_scaled_location(const VerifyOptions &) {
  const VarianceGrid q = variance_grid(qutrit_grid());
  const VarianceGrid f = variance_grid(grid_preset("fig3"));
  const double ratio = 2.0; // fSim gaps / qutrit gaps
  const double fa = f.axis1[f.argmin1];
  const double fb = f.axis2[f.argmin2];
  const bool loc = argmin_near(q, ratio * std::max(fa, fb),
                               ratio * std::min(fa, fb), 0.04 * kPi);
  const double expected_min = f.min_value / (ratio * ratio);
  const bool val = near(q.min_value, expected_min, 0.02 * expected_min);
  return {loc && val, "qutrit argmin " + location_text(q) +
                          "; fSim argmin scaled by 2 " +
                          fmt("(%.3fpi, ", ratio * fa / kPi) +
                          fmt("%.3fpi)", ratio * fb / kPi) + " min/4 " +
                          fmt("%.4f", expected_min)};
}

Outcome check_eigensolver(const VerifyOptions &options) {
  std::mt19937_64 rng(derive_seed(options.seed, 10));
  double worst = 0.0;
  for (int k = 0; k < 1000; ++k) {
    const int dim = 2 + k % 63;
    const HermitianOperator g = random_hermitian(dim, rng);
    const Spectrum spec = diagonalize(g);
    const double scale = g.matrix().norm();
    for (int j = 0; j < dim; ++j) {
      const CVector v = spec.eigenvectors.col(j);
      const double residual =
          (g.matrix() * v - spec.eigenvalues(j) * v).norm() / scale;
      worst = std::max(worst, residual);
    }
  }
  return {worst <= 1e-10,
          "max ||Gv - lambda v|| / ||G||_F over 1000 matrices = " + sci(worst)};
}

const std::vector<CheckDef> &registry() {
  static const std::vector<CheckDef> defs = {
      {"1", "psr recovery", {"rules", "exactness", "psr"}, 5.0, check_psr},
      {"2", "fsim theta four-term rule", {"rules", "exactness", "fsim"}, 10.0,
       check_fsim_theta},
      {"3", "fsim phi two-term rule", {"rules", "exactness", "fsim"}, 0.0,
       check_fsim_phi},
      {"4", "cross-resonance six-term rule", {"rules", "exactness", "cr"}, 10.0,
       check_cross_resonance},
      {"5", "single-gap triangulation", {"rules", "exactness", "triangulation"},
       0.0, check_triangulation},
      {"6", "feature-map evaluation budget", {"rules", "exactness", "feature-map"},
       0.0, check_feature_map},
      {"7", "variance landscapes", {"variance", "grid"}, 60.0, check_landscapes},
      {"8", "sampling consistency", {"variance", "sampling"}, 300.0,
       check_sampling},
      {"9a", "qutrit gaps", {"qutrit", "gates"}, 0.0, check_qutrit_gaps},
      {"9b", "qutrit two-gap rule", {"qutrit", "exactness"}, 0.0,
       check_qutrit_exact},
      {"9c", "qutrit variance optimum at fsim locations", {"qutrit", "variance"},
       0.0, check_qutrit_location},
      {"9c-scaled", "qutrit variance optimum at gap-scaled fsim locations",
       {"qutrit", "variance"}, 0.0, check_qutrit_scaled_location},
      {"10", "eigensolver residuals", {"spectral"}, 0.0, check_eigensolver},
  };
  return defs;
}

bool selected(const CheckDef &def, const std::string &filter) {
  if (filter.empty()) {
    return true;
  }
  auto has = [&](const std::string &s) { return s.find(filter) != std::string::npos; };
  return def.id == filter || has(def.name) ||
         std::any_of(def.tags.begin(), def.tags.end(), has);
}

} // namespace

std::vector<CheckResult> list_checks() {
  std::vector<CheckResult> out;
  for (const auto &def : registry()) {
    out.push_back({def.id, def.name, def.tags, false, "", 0.0});
  }
  return out;
}

std::vector<CheckResult> run_checks(const VerifyOptions &options) {
  std::vector<CheckResult> out;
  for (const auto &def : registry()) {
    if (!selected(def, options.filter)) {
      continue;
    }
    CheckResult result{def.id, def.name, def.tags, false, "", 0.0};
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome outcome = def.run(options);
      result.passed = outcome.passed;
      result.detail = outcome.detail;
    } catch (const std::exception &e) {
      result.passed = false;
      result.detail = std::string("exception: ") + e.what();
    }
    result.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (def.budget_seconds > 0.0 && result.seconds > def.budget_seconds) {
      result.passed = false;
      result.detail += fmt("; runtime %.2f s over budget", result.seconds);
    }
    out.push_back(std::move(result));
  }
  return out;
}

nlohmann::json checks_to_json(const std::vector<CheckResult> &results) {
  nlohmann::json checks = nlohmann::json::array();
  std::size_t failed = 0;
  for (const auto &r : results) {
    failed += r.passed ? 0 : 1;
    checks.push_back({{"id", r.id},
                      {"name", r.name},
                      {"tags", r.tags},
                      {"passed", r.passed},
                      {"detail", r.detail},
                      {"seconds", r.seconds}});
  }
  return {{"checks", checks},
          {"total", results.size()},
          {"failed", failed},
          {"passed", failed == 0}};
}

} // namespace gradshift
