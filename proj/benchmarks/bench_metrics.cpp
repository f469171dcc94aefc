// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include "laborcast/iehi.hpp"
#include "laborcast/metrics.hpp"
#include "laborcast/rng.hpp"

namespace laborcast {
namespace {

std::vector<double> noise(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

void BM_Smape(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = noise(n, 1), b = noise(n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(smape(a, b));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Smape)->Range(64, 1 << 16);

void BM_Spearman(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = noise(n, 3), b = noise(n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(spearman_rho(a, b));
}
BENCHMARK(BM_Spearman)->Range(10, 1 << 14);

void BM_ExactPermutationP(benchmark::State& state) {
  const auto a = noise(10, 5), b = noise(10, 6);
  for (auto _ : state) benchmark::DoNotOptimize(spearman_exact_p(a, b));
}
BENCHMARK(BM_ExactPermutationP)->Unit(benchmark::kMillisecond);

void BM_SmoothedVolatility(benchmark::State& state) {
  const auto t = noise(static_cast<std::size_t>(state.range(0)), 7);
  for (auto _ : state) benchmark::DoNotOptimize(smoothed_volatility(t, 12));
}
BENCHMARK(BM_SmoothedVolatility)->Range(64, 1 << 14);

}  // namespace
}  // namespace laborcast
