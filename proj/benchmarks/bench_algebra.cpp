#include <benchmark/benchmark.h>

#include "vpsdp/algebra.hpp"
#include "vpsdp/instances.hpp"
#include "vpsdp/subsolve.hpp"

namespace {

using namespace vpsdp;

void BM_PenalizedObjective(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = gen_random(n, 1);
  PenaltyState ps(inst);
  ps.add_scaled(Vector::Ones(n), 2.0);
  const Vector x = Vector::Constant(n, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(eval_penalized(inst, ps, x));
}
BENCHMARK(BM_PenalizedObjective)->Arg(100)->Arg(250)->Arg(1000);

void BM_PenalizedGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = gen_random(n, 1);
  PenaltyState ps(inst);
  ps.add_scaled(Vector::Ones(n), 2.0);
  const Vector x = Vector::Constant(n, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_penalized(inst, ps, x));
}
BENCHMARK(BM_PenalizedGradient)->Arg(100)->Arg(250)->Arg(1000);

void BM_SparseGradient(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = gen_random(n, 1, {-100, 100}, {-50, 50}, 0.05);
  PenaltyState ps(inst);
  ps.add_scaled(Vector::Ones(n), 2.0);
  const Vector x = Vector::Constant(n, 0.4);
  for (auto _ : state)
    benchmark::DoNotOptimize(grad_penalized(inst, ps, x));
}
BENCHMARK(BM_SparseGradient)->Arg(250)->Arg(1000);

void BM_KktBreakdown(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const auto inst = gen_random(n, 1);
  PenaltyState ps(inst);
  ps.add_scaled(Vector::Ones(n), 2.0);
  const BoxPoint x(Vector::Constant(n, 0.4));
  for (auto _ : state)
    benchmark::DoNotOptimize(kkt_breakdown(inst, ps, x));
}
BENCHMARK(BM_KktBreakdown)->Arg(100)->Arg(250)->Arg(1000);

}  // namespace
