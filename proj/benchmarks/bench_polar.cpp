#include <benchmark/benchmark.h>

#include "temsig/polar.hpp"
#include "temsig/synth.hpp"

using namespace temsig;

namespace {

Image make_ring_image(int n) {
  synth::RingPatternSpec spec;
  spec.rows = n;
  spec.cols = n;
  spec.rings = {{n / 4.0, 1.0, 1.5}};
  spec.sigma = 0.05;
  spec.seed = 3;
  return synth::gen_ring_pattern(spec).image;
}

}  // namespace

static void BM_ToPolar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Image img = make_ring_image(n);
  for (auto _ : state) {
    const PolarImage polar = to_polar(img, (n - 1) / 2.0, (n - 1) / 2.0, 1.0, 1.0);
    benchmark::DoNotOptimize(polar.values.data());
  }
}
BENCHMARK(BM_ToPolar)->Arg(128)->Arg(256)->Arg(512);

static void BM_HoughCircle(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const Image img = make_ring_image(n);
  const Image edges = canny_edges(img, 1.5, 0.02, 0.08);
  for (auto _ : state) {
    const CircleEstimate est = hough_circle(edges, n / 8.0, n / 2.5, 1.0);
    benchmark::DoNotOptimize(est.votes);
  }
}
BENCHMARK(BM_HoughCircle)->Arg(128)->Arg(256);
