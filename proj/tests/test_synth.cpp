#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "temsig/synth.hpp"

using namespace temsig;
using namespace temsig::synth;

TEST_SUITE("synth") {

TEST_CASE("noise-free corrosion video is the binary front indicator") {
  CorrosionVideoSpec spec;
  spec.rows = 16;
  spec.cols = 16;
  spec.frames = 12;
  spec.base = 0.0;
  spec.delta = 1.0;
  spec.sigma = 0.0;
  spec.drift_amplitude = 0.0;
  spec.rho0 = 1.0;
  spec.speed = 0.7;
  const auto video = gen_corrosion_video(spec);
  for (int t = 0; t < spec.frames; ++t)
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c) {
        const float expect = video.truth.onset_frame(r, c) <= t ? 1.0f : 0.0f;
        CHECK(video.stack.at(t, r, c) == expect);
      }
}

TEST_CASE("zero-speed zero-radius front never corrodes") {
  CorrosionVideoSpec spec;
  spec.rows = 8;
  spec.cols = 8;
  spec.frames = 5;
  spec.speed = 0.0;
  spec.rho0 = 0.0;
  spec.sigma = 0.0;
  spec.drift_amplitude = 0.0;
  const auto video = gen_corrosion_video(spec);
  for (const double v : video.truth.onset_frame.data()) CHECK(std::isinf(v));
  for (int t = 1; t < spec.frames; ++t)
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c)
        CHECK(video.stack.at(t, r, c) == video.stack.at(0, r, c));
}

TEST_CASE("noise-free output is exactly reconstructible from the truth record") {
  CorrosionVideoSpec spec;
  spec.rows = 12;
  spec.cols = 10;
  spec.frames = 8;
  spec.base = 2.0;
  spec.delta = 0.75;
  spec.drift_amplitude = 0.3;
  spec.rho0 = 0.5;
  spec.speed = 1.0;
  const auto video = gen_corrosion_video(spec);
  for (int t = 0; t < spec.frames; ++t)
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c) {
        const double v = video.truth.base + video.truth.drift[t] +
                         (video.truth.onset_frame(r, c) <= t ? video.truth.delta : 0.0);
        CHECK(video.stack.at(t, r, c) == static_cast<float>(v));
      }
}

TEST_CASE("identical seed gives bit-identical stacks for any worker count") {
  CorrosionVideoSpec spec;
  spec.sigma = 0.4;
  spec.drift_amplitude = 0.2;
  spec.speed = 0.3;
  spec.seed = 2024;
  setenv("TEMSIG_THREADS", "1", 1);
  const auto a = gen_corrosion_video(spec);
  setenv("TEMSIG_THREADS", "4", 1);
  const auto b = gen_corrosion_video(spec);
  unsetenv("TEMSIG_THREADS");
  const auto c = gen_corrosion_video(spec);
  CHECK(a.stack.data == b.stack.data);
  CHECK(a.stack.data == c.stack.data);

  spec.seed = 2025;
  const auto d = gen_corrosion_video(spec);
  CHECK(a.stack.data != d.stack.data);
}

TEST_CASE("ring pattern: no rings, no spots -> single central Gaussian") {
  RingPatternSpec spec;
  spec.rows = 64;
  spec.cols = 64;
  spec.sigma = 0.0;
  const auto ring = gen_ring_pattern(spec);
  // argmax at the center, monotone decay along a row
  const int cy = 31, cx = 31;  // (rows-1)/2 = 31.5 truncated either side is fine
  double best = -1;
  int best_r = -1, best_c = -1;
  for (int r = 0; r < 64; ++r)
    for (int c = 0; c < 64; ++c)
      if (ring.image(r, c) > best) {
        best = ring.image(r, c);
        best_r = r;
        best_c = c;
      }
  CHECK(std::abs(best_r - cy) <= 1);
  CHECK(std::abs(best_c - cx) <= 1);
  CHECK(ring.image(32, 50) < ring.image(32, 40));
}

TEST_CASE("ring radial profile peaks at the ring radius") {
  RingPatternSpec spec;
  spec.rows = 128;
  spec.cols = 128;
  spec.center_row = 64.0;
  spec.center_col = 64.0;
  spec.center_intensity = 2.0;
  spec.center_width = 3.0;
  spec.rings = {{20.0, 1.0, 1.5}};
  spec.sigma = 0.0;
  const auto ring = gen_ring_pattern(spec);

  // mean intensity per integer radius bin, ignoring the central peak region
  std::vector<double> sum(60, 0.0);
  std::vector<int> count(60, 0);
  for (int r = 0; r < 128; ++r)
    for (int c = 0; c < 128; ++c) {
      const double dist = std::hypot(r - 64.0, c - 64.0);
      const int bin = static_cast<int>(dist);
      if (bin >= 12 && bin < 60) {
        sum[bin] += ring.image(r, c);
        ++count[bin];
      }
    }
  int best = 12;
  for (int b = 12; b < 60; ++b)
    if (count[b] > 0 && sum[b] / count[b] > sum[best] / count[best]) best = b;
  CHECK(std::abs(best + 0.5 - 20.0) <= 1.0);  // bin center within the rasterized ring
}

TEST_CASE("ring pattern determinism and needle mask") {
  RingPatternSpec spec;
  spec.sigma = 0.2;
  spec.seed = 7;
  spec.needle = NeedleSpec{90.0, 2.0};
  const auto a = gen_ring_pattern(spec);
  const auto b = gen_ring_pattern(spec);
  CHECK(a.image.data().size() == b.image.data().size());
  for (std::size_t i = 0; i < a.image.size(); ++i)
    CHECK(a.image.data()[i] == b.image.data()[i]);
  CHECK(a.truth.mask.count() > 0);
  // masked pixels were zeroed
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c)
      if (a.truth.mask.at(r, c)) CHECK(a.image(r, c) == 0.0);
}

TEST_CASE("spot outside the image is rejected") {
  RingPatternSpec spec;
  spec.rows = 32;
  spec.cols = 32;
  spec.spots = {{40.0, 0.0, 0.1, 1.0}};
  CHECK_THROWS(gen_ring_pattern(spec));
}

TEST_CASE("sparse stream: nu >= length is a pure null stream") {
  SparseStreamSpec spec;
  spec.d = 4;
  spec.length = 50;
  spec.change_point = 50;
  spec.support = 2;
  spec.magnitude = 5.0;
  spec.seed = 11;
  const auto s = gen_sparse_stream(spec);

  SparseStreamSpec null_spec = spec;
  null_spec.magnitude = 0.0;
  const auto n = gen_sparse_stream(null_spec);
  for (int t = 0; t < spec.length; ++t)
    for (int i = 0; i < spec.d; ++i) CHECK(s.samples[t][i] == n.samples[t][i]);
}

TEST_CASE("sparse stream: theta has the requested support and magnitude") {
  SparseStreamSpec spec;
  spec.d = 100;
  spec.length = 1;
  spec.support = 5;
  spec.magnitude = 0.5;
  spec.seed = 3;
  const auto s = gen_sparse_stream(spec);
  int nonzero = 0;
  for (double v : s.theta) {
    if (v != 0.0) {
      ++nonzero;
      CHECK(v == 0.5);
    }
  }
  CHECK(nonzero == 5);
}

TEST_CASE("support larger than d is rejected") {
  SparseStreamSpec spec;
  spec.d = 3;
  spec.support = 4;
  CHECK_THROWS(gen_sparse_stream(spec));
}

TEST_CASE("post-change mean shift is present: Monte Carlo over seeds") {
  // d=1, mu=10, nu=5: the mean of entries 6.. exceeds 5 with overwhelming
  // probability (mean 10, sd 1/sqrt(15))
  int hits = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    SparseStreamSpec spec;
    spec.d = 1;
    spec.length = 20;
    spec.change_point = 5;
    spec.support = 1;
    spec.magnitude = 10.0;
    spec.seed = seed;
    const auto s = gen_sparse_stream(spec);
    double mean = 0.0;
    for (int t = 5; t < 20; ++t) mean += s.samples[t][0];
    mean /= 15.0;
    if (mean > 5.0) ++hits;
  }
  CHECK(hits == 1000);
}

TEST_CASE("nbed grid: identity field gives identical noise-free patterns") {
  NbedGridSpec spec;
  spec.scan_p = 2;
  spec.scan_q = 3;
  spec.rows = 64;
  spec.cols = 64;
  spec.gref = {{18.0, 0.0}, {0.0, 18.0}};
  spec.sigma = 0.0;
  const auto grid = gen_nbed_grid(spec);
  const Image first = grid.grid.pattern(0, 0);
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 3; ++q) {
      const Image other = grid.grid.pattern(p, q);
      for (std::size_t i = 0; i < first.size(); ++i)
        CHECK(other.data()[i] == first.data()[i]);
    }
}

namespace {

// intensity centroid of the blob around (cx, cy)
void blob_centroid(const Image& img, double cx, double cy, double window, double& ox,
                   double& oy) {
  double wsum = 0.0, xs = 0.0, ys = 0.0;
  for (int r = 0; r < img.rows(); ++r)
    for (int c = 0; c < img.cols(); ++c) {
      if (std::hypot(c - cx, r - cy) > window) continue;
      wsum += img(r, c);
      xs += img(r, c) * c;
      ys += img(r, c) * r;
    }
  ox = xs / wsum;
  oy = ys / wsum;
}

}  // namespace

TEST_CASE("nbed grid: pure rotation rotates every g-vector") {
  NbedGridSpec spec;
  spec.scan_p = 1;
  spec.scan_q = 1;
  spec.rows = 96;
  spec.cols = 96;
  spec.gref = {{24.0, 0.0}};
  spec.disk_radius = 5.0;
  spec.field.kind = FieldKind::constant;
  spec.field.f0 = Mat2::rotation_deg(5.0);
  const auto grid = gen_nbed_grid(spec);
  const Image pat = grid.grid.pattern(0, 0);

  // R^{-T} = R for rotations: the satellite rotates by +5 degrees
  const double rad = 5.0 * std::acos(-1.0) / 180.0;
  const double ex = 48.0 + 24.0 * std::cos(rad);
  const double ey = 48.0 + 24.0 * std::sin(rad);
  double ox, oy;
  blob_centroid(pat, ex, ey, 8.0, ox, oy);
  CHECK(std::abs(ox - ex) < 0.1);
  CHECK(std::abs(oy - ey) < 0.1);
}

TEST_CASE("nbed grid: isotropic strain shrinks reciprocal vectors by 1/1.01") {
  NbedGridSpec spec;
  spec.scan_p = 1;
  spec.scan_q = 1;
  spec.rows = 96;
  spec.cols = 96;
  spec.gref = {{24.0, 0.0}};
  spec.disk_radius = 5.0;
  spec.field.kind = FieldKind::constant;
  spec.field.f0 = {1.01, 0.0, 0.0, 1.01};
  const auto grid = gen_nbed_grid(spec);
  const Image pat = grid.grid.pattern(0, 0);

  const double ex = 48.0 + 24.0 / 1.01;  // 0.24 px inward of the reference spot
  double ox, oy;
  blob_centroid(pat, ex, 48.0, 8.0, ox, oy);
  CHECK(std::abs(ox - ex) < 0.1);
  CHECK(std::abs(oy - 48.0) < 0.1);
}

TEST_CASE("disk pair: exact subpixel shift and determinism") {
  DiskPairSpec spec;
  spec.shift_x = 0.25;
  spec.shift_y = -0.4;
  spec.sigma = 0.05;
  spec.seed = 42;
  const auto a = gen_disk_pair(spec);
  const auto b = gen_disk_pair(spec);
  CHECK(a.shift_x == 0.25);
  for (std::size_t i = 0; i < a.shifted.size(); ++i)
    CHECK(a.shifted.data()[i] == b.shifted.data()[i]);

  // noise-free pair: the shifted image equals the reference profile evaluated
  // at shifted coordinates (same renderer, shifted center)
  DiskPairSpec clean = spec;
  clean.sigma = 0.0;
  const auto c = gen_disk_pair(clean);
  double mass_ref = 0.0, mass_shift = 0.0;
  for (std::size_t i = 0; i < c.reference.size(); ++i) {
    mass_ref += c.reference.data()[i];
    mass_shift += c.shifted.data()[i];
  }
  CHECK(mass_shift == doctest::Approx(mass_ref).epsilon(1e-6));
}

TEST_CASE("bullseye with ring_count 1 equals the flat disk") {
  DiskPairSpec flat;
  flat.bullseye = false;
  DiskPairSpec bull;
  bull.bullseye = true;
  bull.ring_count = 1;
  const auto a = gen_disk_pair(flat);
  const auto b = gen_disk_pair(bull);
  for (std::size_t i = 0; i < a.reference.size(); ++i)
    CHECK(a.reference.data()[i] == b.reference.data()[i]);
}

}  // TEST_SUITE
