#include <benchmark/benchmark.h>

#include <vector>

#include "qfreg/clt_experiment.hpp"
#include "qfreg/spectral.hpp"

namespace {

void BM_Eigenvalues(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    qfreg::SymmetricOperator op = qfreg::banded_operator(n);
    benchmark::DoNotOptimize(op.eigenvalues().data());
  }
}
BENCHMARK(BM_Eigenvalues)->Arg(64)->Arg(256)->Arg(512);

void BM_ElementarySymmetric(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / static_cast<double>(n + i);
  for (auto _ : state) benchmark::DoNotOptimize(qfreg::elementary_symmetric(v, 16));
}
BENCHMARK(BM_ElementarySymmetric)->Arg(256)->Arg(4096);

void BM_ElementarySymmetricLog(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = 1.0 / static_cast<double>(n + i);
  for (auto _ : state) benchmark::DoNotOptimize(qfreg::elementary_symmetric_log(v, 16));
}
BENCHMARK(BM_ElementarySymmetricLog)->Arg(256)->Arg(4096);

}  // namespace
