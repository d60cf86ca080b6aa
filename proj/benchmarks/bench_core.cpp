#include <benchmark/benchmark.h>

#include "credal/credal_region.hpp"
#include "credal/credal_sets.hpp"
#include "credal/uncertainty.hpp"

using namespace credal;

namespace {

CredalRegion region_for(std::size_t k) {
  // Decreasing confidences with a threshold that cuts off the far corners.
  std::vector<double> e(k);
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += (e[i] = 1.0 / static_cast<double>(i + 1));
  for (double& x : e) x /= s;
  return CredalRegion(ConformityScores{e}, 0.6 * e[0] + 0.4 * e[k - 1]);
}

void BM_Envelope(benchmark::State& state) {
  const auto r = region_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(envelope(r));
}
BENCHMARK(BM_Envelope)->Arg(3)->Arg(5)->Arg(10);

void BM_Algorithm1(benchmark::State& state) {
  const auto env = envelope(region_for(static_cast<std::size_t>(state.range(0))));
  for (auto _ : state) benchmark::DoNotOptimize(ihds_algorithm1(env, 0.05));
}
BENCHMARK(BM_Algorithm1)->Arg(3)->Arg(5)->Arg(10);

void BM_Prps(benchmark::State& state) {
  const auto k = static_cast<std::size_t>(state.range(0));
  const auto r = region_for(k);
  for (auto _ : state) benchmark::DoNotOptimize(prps(r, 0.05, default_resolution(k)));
}
BENCHMARK(BM_Prps)->Arg(3)->Arg(5);

void BM_Decompose(benchmark::State& state) {
  const auto r = region_for(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(decompose(r, false));
}
BENCHMARK(BM_Decompose)->Arg(3)->Arg(5);

}  // namespace

BENCHMARK_MAIN();
