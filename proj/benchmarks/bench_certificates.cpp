#include <benchmark/benchmark.h>

#include "gradnorm/certificates.hpp"
#include "gradnorm/instances.hpp"

namespace {

using namespace gradnorm;

void BM_CheckGd(benchmark::State& state) {
  const SmoothInstance in = random_quadratic(2, 20);
  const Trace t = run_gd(in.problem, in.x0, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(check_gd(t, in.problem));
}
BENCHMARK(BM_CheckGd);

void BM_CheckFgmThenOgmg(benchmark::State& state) {
  const SmoothInstance in = random_quadratic(2, 20);
  const Trace t = run_fgm_then_ogmg(in.problem, in.x0, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(check_fgm_then_ogmg(t, in.problem));
}
BENCHMARK(BM_CheckFgmThenOgmg)->Arg(100)->Arg(1000);

void BM_CheckHalpern(benchmark::State& state) {
  const OperatorInstance in = random_rotation(2);
  const Trace t = run_halpern(in.problem, in.u0, 1000);
  for (auto _ : state) benchmark::DoNotOptimize(check_halpern(t, in.problem));
}
BENCHMARK(BM_CheckHalpern);

}  // namespace
