#include <benchmark/benchmark.h>

#include "qfreg/clt_experiment.hpp"
#include "qfreg/determinantal.hpp"
#include "qfreg/splitting.hpp"

namespace {

void BM_BuildFromOperator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto q = static_cast<std::size_t>(state.range(1));
  const auto op = qfreg::banded_operator(n).normalized();
  for (auto _ : state) benchmark::DoNotOptimize(qfreg::build_from_operator(op, q));
}
BENCHMARK(BM_BuildFromOperator)->Args({10, 2})->Args({14, 2})->Args({12, 3});

void BM_SplitOnce(benchmark::State& state) {
  const auto b = qfreg::build_from_operator(qfreg::banded_operator(14).normalized(), 1);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    const qfreg::SplitOptions opt{seed++, 4096, qfreg::SplitMode::sampling};
    benchmark::DoNotOptimize(qfreg::split_once(b, opt));
  }
}
BENCHMARK(BM_SplitOnce);

}  // namespace
