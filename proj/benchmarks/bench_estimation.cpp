#include <benchmark/benchmark.h>

#include <vector>

#include "qfreg/bouleau.hpp"
#include "qfreg/estimation.hpp"

namespace {

void BM_Ecf(benchmark::State& state) {
  const std::vector<double> lam{0.6, -0.6, 0.4, -0.2, 0.2824};
  const auto samples = qfreg::sample_gaussian_qf(lam, static_cast<std::size_t>(state.range(0)), 7);
  const auto grid = qfreg::uniform_grid(16.0, 257);
  for (auto _ : state) benchmark::DoNotOptimize(qfreg::ecf(samples, grid));
  state.SetItemsProcessed(state.iterations() * state.range(0) * 257);
}
BENCHMARK(BM_Ecf)->Arg(10000)->Arg(100000);

void BM_SampleGaussianQf(benchmark::State& state) {
  const std::vector<double> lam{0.6, -0.6, 0.4, -0.2, 0.2824};
  for (auto _ : state) benchmark::DoNotOptimize(qfreg::sample_gaussian_qf(lam, 100000, 7));
}
BENCHMARK(BM_SampleGaussianQf);

}  // namespace
