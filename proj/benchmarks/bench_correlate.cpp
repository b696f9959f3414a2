#include <benchmark/benchmark.h>

#include "temsig/nbed.hpp"
#include "temsig/synth.hpp"

using namespace temsig;

static void BM_HybridCorrelate(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  synth::DiskPairSpec spec;
  spec.rows = n;
  spec.cols = n;
  spec.radius = n / 8.0;
  spec.shift_x = 0.3;
  const auto pair = synth::gen_disk_pair(spec);
  for (auto _ : state) {
    const Image corr = nbed::hybrid_correlate(pair.reference, pair.shifted, 0.5);
    benchmark::DoNotOptimize(corr.data().data());
  }
}
BENCHMARK(BM_HybridCorrelate)->Arg(64)->Arg(128)->Arg(256);

static void BM_RegisterDisks(benchmark::State& state) {
  const int kappa = static_cast<int>(state.range(0));
  synth::DiskPairSpec spec;
  spec.rows = 128;
  spec.cols = 128;
  spec.radius = 8.0;
  spec.shift_x = 0.3;
  spec.shift_y = -0.2;
  const auto pair = synth::gen_disk_pair(spec);
  const auto ref = nbed::make_reference_disk(8.0, nbed::DiskKind::flat, 128, 128);
  for (auto _ : state) {
    const auto gset =
        nbed::register_disks(pair.shifted, ref, 1, 0.5, nbed::Prefilter::sobel, kappa);
    benchmark::DoNotOptimize(gset.center.x);
  }
}
BENCHMARK(BM_RegisterDisks)->Arg(2)->Arg(16)->Arg(32);
