#include <benchmark/benchmark.h>

#include "temsig/detect.hpp"
#include "temsig/rng.hpp"

using namespace temsig;

static void BM_DetectorStep(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int w = static_cast<int>(state.range(1));
  detect::ProcedureConfig cfg;
  cfg.d = d;
  cfg.window = w;
  cfg.constraint.s = 2.0;

  GaussianStream noise(1, 0);
  std::vector<double> x(d);
  detect::DetectorState det(cfg);
  std::uint64_t ctr = 0;
  for (auto _ : state) {
    for (int i = 0; i < d; ++i) x[i] = noise.normal(ctr++);
    det.step(x);
    benchmark::DoNotOptimize(det.acm_statistic());
  }
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_DetectorStep)->Args({100, 50})->Args({360, 50})->Args({100, 200});

static void BM_L1Projection(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  GaussianStream noise(2, 0);
  std::vector<double> v(d);
  for (int i = 0; i < d; ++i) v[i] = noise.normal(i);
  for (auto _ : state) {
    std::vector<double> u = v;
    detect::project_l1_ball_inplace(u, 1.0);
    benchmark::DoNotOptimize(u.data());
  }
}
BENCHMARK(BM_L1Projection)->Arg(100)->Arg(360)->Arg(4096);

BENCHMARK_MAIN();
