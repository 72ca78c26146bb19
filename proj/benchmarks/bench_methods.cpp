#include <benchmark/benchmark.h>

#include "gradnorm/instances.hpp"
#include "gradnorm/methods.hpp"
#include "gradnorm/schedules.hpp"

namespace {

using namespace gradnorm;

void BM_Gd(benchmark::State& state) {
  const SmoothInstance in = random_quadratic(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_gd(in.problem, in.x0, 1000));
}
BENCHMARK(BM_Gd)->Arg(20)->Arg(200);

void BM_Fgm(benchmark::State& state) {
  const SmoothInstance in = random_quadratic(1, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(run_fgm(in.problem, in.x0, 1000));
}
BENCHMARK(BM_Fgm)->Arg(20)->Arg(200);

void BM_Ogmg(benchmark::State& state) {
  const SmoothInstance in = random_quadratic(1, 50);
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(run_ogmg(in.problem, in.x0, K));
}
BENCHMARK(BM_Ogmg)->Arg(100)->Arg(1000);

void BM_Halpern(benchmark::State& state) {
  const OperatorInstance in = random_rotation(1);
  for (auto _ : state) benchmark::DoNotOptimize(run_halpern(in.problem, in.u0, 1000));
}
BENCHMARK(BM_Halpern);

void BM_OgmgSchedule(benchmark::State& state) {
  const int K = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ogmg_schedule(K));
}
BENCHMARK(BM_OgmgSchedule)->Arg(1000)->Arg(10000);

void BM_OgmgBetas(benchmark::State& state) {
  const OgmgSchedule s = ogmg_schedule(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(ogmg_betas(s));
}
BENCHMARK(BM_OgmgBetas)->Arg(50)->Arg(200);

}  // namespace
