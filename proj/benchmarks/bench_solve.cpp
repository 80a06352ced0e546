#include <benchmark/benchmark.h>

#include "vpsdp/driver.hpp"
#include "vpsdp/instances.hpp"
#include "vpsdp/oracle.hpp"

namespace {

using namespace vpsdp;

void BM_SubsolvePabb(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = gen_random(n, 2);
  const auto working = reformulate(inst, choose_shift(inst));
  PenaltyState ps(working);
  ps.add_scaled(Vector::Ones(n), 1.0);
  const BoxPoint x0 = initial_point(working);
  SolverConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(subsolve(working, ps, x0, cfg));
}
BENCHMARK(BM_SubsolvePabb)->Arg(50)->Arg(100)->Arg(250)
    ->Unit(benchmark::kMicrosecond);

void BM_SolveEndToEnd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = gen_random(n, 3);
  SolverConfig cfg;
  cfg.engine = state.range(1) == 0 ? Engine::Ppa : Engine::Pabb;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve(inst, cfg));
}
BENCHMARK(BM_SolveEndToEnd)
    ->Args({50, 0})->Args({50, 1})
    ->Args({100, 0})->Args({100, 1})
    ->Unit(benchmark::kMillisecond);

void BM_BruteForce(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = gen_random(n, 4);
  for (auto _ : state)
    benchmark::DoNotOptimize(brute_force(inst));
}
BENCHMARK(BM_BruteForce)->Arg(16)->Arg(20)->Unit(benchmark::kMillisecond);

}  // namespace
