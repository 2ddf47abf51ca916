#include <benchmark/benchmark.h>

#include "qfreg/random.hpp"

namespace {

using qfreg::rng::CounterStream;
using qfreg::rng::StreamTag;

void BM_Uniform(benchmark::State& state) {
  CounterStream s(1, StreamTag::sample, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.uniform());
}
BENCHMARK(BM_Uniform);

void BM_Normal(benchmark::State& state) {
  CounterStream s(1, StreamTag::sample, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.normal());
}
BENCHMARK(BM_Normal);

void BM_Gamma(benchmark::State& state) {
  const double shape = static_cast<double>(state.range(0)) / 10.0;
  CounterStream s(1, StreamTag::sample, 0, 0);
  for (auto _ : state) benchmark::DoNotOptimize(s.gamma(shape));
}
BENCHMARK(BM_Gamma)->Arg(5)->Arg(20);

}  // namespace
