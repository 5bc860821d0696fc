#include <random>

#include <benchmark/benchmark.h>

#include "gradshift/gates.hpp"
#include "gradshift/rules.hpp"
#include "gradshift/sampling.hpp"
#include "gradshift/sim.hpp"
#include "gradshift/spectral.hpp"

using namespace gradshift;

namespace {

void BM_Diagonalize(benchmark::State &state) {
  std::mt19937_64 rng(1);
  const HermitianOperator g = random_hermitian(static_cast<int>(state.range(0)), rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(diagonalize(g));
  }
}
BENCHMARK(BM_Diagonalize)->Arg(2)->Arg(8)->Arg(32)->Arg(64);

// Equidistant gaps 2, 4, ..., 2S with the stencil (2l-1)pi/(2S).
void BM_SymmetricRule(benchmark::State &state) {
  const auto s_count = static_cast<int>(state.range(0));
  std::vector<double> values;
  std::vector<double> shifts;
  for (int l = 1; l <= s_count; ++l) {
    values.push_back(2.0 * l);
    shifts.push_back((2.0 * l - 1.0) * kPi / (2.0 * s_count));
  }
  const GapSet gaps = GapSet::from_values(values);
  for (auto _ : state) {
    benchmark::DoNotOptimize(symmetric_rule(gaps, shifts));
  }
}
BENCHMARK(BM_SymmetricRule)->Arg(1)->Arg(3)->Arg(8)->Arg(16);

void BM_Expectation(benchmark::State &state) {
  std::mt19937_64 rng(2);
  const Circuit c = random_circuit(fsim().generator("theta").generator,
                                   random_hermitian(4, rng), rng);
  double x = 0.0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(expectation(c, x));
    x += 1e-3;
  }
}
BENCHMARK(BM_Expectation);

void BM_VarianceGridTwoGaps(benchmark::State &state) {
  const GridSpec spec = grid_preset("fig3");
  for (auto _ : state) {
    benchmark::DoNotOptimize(variance_grid(spec));
  }
}
BENCHMARK(BM_VarianceGridTwoGaps)->Unit(benchmark::kMillisecond);

void BM_EstimateDerivative(benchmark::State &state) {
  std::mt19937_64 rng(3);
  const Circuit c = random_circuit(fsim().generator("theta").generator,
                                   random_hermitian(4, rng), rng);
  const GapSet gaps = c.generator_gaps();
  const ShiftRule r = symmetric_rule(gaps, default_shifts(gaps));
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        estimate_derivative(c, 0.4, r, static_cast<std::uint64_t>(state.range(0)), ++seed));
  }
}
BENCHMARK(BM_EstimateDerivative)->Arg(100)->Arg(10000);

} // namespace

BENCHMARK_MAIN();
