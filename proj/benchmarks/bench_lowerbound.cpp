#include <benchmark/benchmark.h>

#include "gradnorm/lowerbound.hpp"

namespace {

using namespace gradnorm;

void BM_SweepGda(benchmark::State& state) {
  const ScliMethod m = method_to_scli(Method::GDA, 1.0, 1, 1.0);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(sweep_hard_instances(m, K, 1.0, 10000, 1));
}
BENCHMARK(BM_SweepGda)->Arg(16)->Arg(256);

void BM_SweepHalpernBlock(benchmark::State& state) {
  const ScliMethod m = method_to_scli(Method::Halpern, 0.0, static_cast<int>(state.range(0)), 1.0);
  for (auto _ : state) benchmark::DoNotOptimize(sweep_hard_instances(m, 8, 1.0, 10000, 1));
}
BENCHMARK(BM_SweepHalpernBlock)->Arg(2)->Arg(8);

void BM_PolySup(benchmark::State& state) {
  const Polynomial r = Polynomial::one_plus({-2.0, 1.5, -0.4});
  for (auto _ : state) benchmark::DoNotOptimize(poly_sup_check(r, static_cast<int>(state.range(0)), 1.0));
}
BENCHMARK(BM_PolySup)->Arg(1)->Arg(4);

}  // namespace
