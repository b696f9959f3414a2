#include "temsig/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "temsig/errors.hpp"
#include "temsig/parallel.hpp"
#include "temsig/rng.hpp"

namespace temsig::synth {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Substream roles; the unit index (frame, scan point, ...) fills the low bits.
constexpr std::uint64_t kStreamPixelNoise = 1ull << 32;
constexpr std::uint64_t kStreamSupport = 2ull << 32;
constexpr std::uint64_t kStreamSamples = 3ull << 32;
constexpr std::uint64_t kStreamBackground = 4ull << 32;

double smooth_drift(double amplitude, int t, int frames) {
  return amplitude * std::sin(2.0 * std::numbers::pi * t / std::max(frames, 1));
}

}  // namespace

double disk_profile(double dist, double radius) {
  // hard edge convolved with a 1 px Gaussian
  return 0.5 * std::erfc((dist - radius) / std::numbers::sqrt2);
}

double bullseye_factor(double dist, double radius, int ring_count) {
  if (ring_count <= 1) return 1.0;
  const double annulus = radius / ring_count;
  int j = static_cast<int>(dist / annulus);
  if (j >= ring_count) j = ring_count - 1;
  return (j % 2 == 0) ? 1.0 : 0.2;
}

void add_disk(Image& img, double x, double y, double radius, double intensity, bool bullseye,
              int ring_count) {
  // disk support is compact; only touch pixels near it
  const int r0 = std::max(0, static_cast<int>(std::floor(y - radius - 5)));
  const int r1 = std::min(img.rows() - 1, static_cast<int>(std::ceil(y + radius + 5)));
  const int c0 = std::max(0, static_cast<int>(std::floor(x - radius - 5)));
  const int c1 = std::min(img.cols() - 1, static_cast<int>(std::ceil(x + radius + 5)));
  for (int r = r0; r <= r1; ++r) {
    for (int c = c0; c <= c1; ++c) {
      const double dist = std::hypot(c - x, r - y);
      double v = intensity * disk_profile(dist, radius);
      if (bullseye) v *= bullseye_factor(dist, radius, ring_count);
      img(r, c) += v;
    }
  }
}

CorrosionVideo gen_corrosion_video(const CorrosionVideoSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1 || spec.frames < 1)
    fail(Errc::invalid_argument, "corrosion video requires positive dimensions");
  if (spec.delta <= 0.0) fail(Errc::invalid_argument, "delta must be > 0");
  if (spec.sigma < 0.0) fail(Errc::invalid_argument, "sigma must be >= 0");

  const double cy = spec.front_row < 0.0 ? (spec.rows - 1) / 2.0 : spec.front_row;
  const double cx = spec.front_col < 0.0 ? (spec.cols - 1) / 2.0 : spec.front_col;

  const double diag = std::hypot(spec.rows - 1.0, spec.cols - 1.0);
  if (spec.rho0 + spec.speed * (spec.frames - 1) > diag)
    warn("corrosion front exceeds the frame diagonal before the last frame");

  CorrosionVideo out;
  out.truth.base = spec.base;
  out.truth.delta = spec.delta;
  out.truth.drift.resize(spec.frames);
  for (int t = 0; t < spec.frames; ++t)
    out.truth.drift[t] = smooth_drift(spec.drift_amplitude, t, spec.frames);

  out.truth.onset_frame = Image(spec.rows, spec.cols, kInf);
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c) {
      const double dist = std::hypot(c - cx, r - cy);
      // first integer frame with dist < rho(t)
      double onset = kInf;
      if (dist < spec.rho0) {
        onset = 0.0;
      } else if (spec.speed > 0.0) {
        const double exact = (dist - spec.rho0) / spec.speed;
        const double first = std::floor(exact) == exact ? exact + 1.0 : std::ceil(exact);
        if (first <= spec.frames - 1) onset = first;
      }
      out.truth.onset_frame(r, c) = onset;
    }
  }

  VideoStack stack(spec.frames, spec.rows, spec.cols);
  stack.frame_interval = spec.frame_interval;
  stack.pixel_size = spec.pixel_size;
  parallel_for(static_cast<std::size_t>(spec.frames), [&](std::size_t ti) {
    const int t = static_cast<int>(ti);
    GaussianStream noise(spec.seed, kStreamPixelNoise | ti);
    const double drift = out.truth.drift[t];
    std::size_t idx = stack.index(t, 0, 0);
    std::uint64_t ctr = 0;
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c, ++idx, ++ctr) {
        double v = spec.base + drift;
        if (out.truth.onset_frame(r, c) <= t) v += spec.delta;
        if (spec.sigma > 0.0) v += spec.sigma * noise.normal(ctr);
        stack.data[idx] = static_cast<float>(v);
      }
    }
  });
  out.stack = std::move(stack);
  return out;
}

RingPattern gen_ring_pattern(const RingPatternSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1)
    fail(Errc::invalid_argument, "ring pattern requires positive dimensions");
  const double cy = spec.center_row < 0.0 ? (spec.rows - 1) / 2.0 : spec.center_row;
  const double cx = spec.center_col < 0.0 ? (spec.cols - 1) / 2.0 : spec.center_col;

  for (const auto& s : spec.spots) {
    const double rad = s.angle_deg * std::numbers::pi / 180.0;
    const double sx = cx + s.radius * std::cos(rad);
    const double sy = cy + s.radius * std::sin(rad);
    if (sx < 0 || sx > spec.cols - 1 || sy < 0 || sy > spec.rows - 1)
      fail(Errc::spot_outside_image, "spot lies outside the image");
  }

  RingPattern out;
  out.truth.center_row = cy;
  out.truth.center_col = cx;
  out.truth.rings = spec.rings;
  out.truth.spots = spec.spots;
  out.truth.mask = MaskImage(spec.rows, spec.cols, false);

  Image img(spec.rows, spec.cols, 0.0);
  GaussianStream noise(spec.seed, kStreamPixelNoise);
  std::uint64_t ctr = 0;
  for (int r = 0; r < spec.rows; ++r) {
    for (int c = 0; c < spec.cols; ++c, ++ctr) {
      const double dy = r - cy;
      const double dx = c - cx;
      const double dist = std::hypot(dx, dy);
      double v = spec.center_intensity *
                 std::exp(-dist * dist / (2.0 * spec.center_width * spec.center_width));
      for (const auto& ring : spec.rings) {
        const double dr = dist - ring.radius;
        v += ring.intensity * std::exp(-dr * dr / (2.0 * ring.width * ring.width));
      }
      for (const auto& s : spec.spots) {
        const double rad = s.angle_deg * std::numbers::pi / 180.0;
        const double sx = cx + s.radius * std::cos(rad);
        const double sy = cy + s.radius * std::sin(rad);
        const double d2 = (c - sx) * (c - sx) + (r - sy) * (r - sy);
        v += s.intensity * std::exp(-d2 / (2.0 * s.width * s.width));
      }
      if (spec.sigma > 0.0) v += spec.sigma * noise.normal(ctr);
      img(r, c) = v;
    }
  }

  if (spec.needle) {
    const double rad = spec.needle->angle_deg * std::numbers::pi / 180.0;
    const double ux = std::cos(rad);
    const double uy = std::sin(rad);
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c) {
        const double dx = c - cx;
        const double dy = r - cy;
        const double along = dx * ux + dy * uy;
        const double across = std::abs(-dx * uy + dy * ux);
        if (along >= 0.0 && across <= spec.needle->half_width) {
          img(r, c) = 0.0;
          out.truth.mask.set(r, c, true);
        }
      }
    }
  }

  out.image = std::move(img);
  return out;
}

SparseStream gen_sparse_stream(const SparseStreamSpec& spec) {
  if (spec.d < 1 || spec.length < 1)
    fail(Errc::invalid_argument, "stream requires d >= 1 and length >= 1");
  if (spec.support > spec.d) fail(Errc::support_too_large, "support s* exceeds dimension d");
  if (spec.support < 0) fail(Errc::invalid_argument, "support must be >= 0");

  SparseStream out;
  out.change_point = spec.change_point;
  out.theta.assign(spec.d, 0.0);

  // seeded draw of s* distinct coordinates (partial Fisher-Yates)
  GaussianStream picker(spec.seed, kStreamSupport);
  std::vector<int> coords(spec.d);
  for (int i = 0; i < spec.d; ++i) coords[i] = i;
  for (int i = 0; i < spec.support; ++i) {
    const std::uint64_t j =
        i + picker.uniform_index(static_cast<std::uint64_t>(i), spec.d - i);
    std::swap(coords[i], coords[j]);
    out.theta[coords[i]] = spec.magnitude;
  }

  out.samples.assign(spec.length, std::vector<double>(spec.d));
  GaussianStream noise(spec.seed, kStreamSamples);
  std::uint64_t ctr = 0;
  for (int t = 0; t < spec.length; ++t) {
    const bool post = (t + 1) > spec.change_point;  // samples are 1-indexed in the model
    for (int i = 0; i < spec.d; ++i, ++ctr) {
      out.samples[t][i] = noise.normal(ctr) + (post ? out.theta[i] : 0.0);
    }
  }
  return out;
}

Mat2 field_at(const FieldSpec& field, int p, int q, int scan_p, int scan_q) {
  switch (field.kind) {
    case FieldKind::constant:
      return field.f0;
    case FieldKind::ramp: {
      const double u = scan_p > 1 ? static_cast<double>(p) / (scan_p - 1) - 0.5 : 0.0;
      const double v = scan_q > 1 ? static_cast<double>(q) / (scan_q - 1) - 0.5 : 0.0;
      Mat2 f = field.f0;
      f.a11 += field.ramp_p.a11 * u + field.ramp_q.a11 * v;
      f.a12 += field.ramp_p.a12 * u + field.ramp_q.a12 * v;
      f.a21 += field.ramp_p.a21 * u + field.ramp_q.a21 * v;
      f.a22 += field.ramp_p.a22 * u + field.ramp_q.a22 * v;
      return f;
    }
    case FieldKind::blob: {
      const double pc = field.blob_p < 0.0 ? (scan_p - 1) / 2.0 : field.blob_p;
      const double qc = field.blob_q < 0.0 ? (scan_q - 1) / 2.0 : field.blob_q;
      const double d2 = (p - pc) * (p - pc) + (q - qc) * (q - qc);
      const double w = std::exp(-d2 / (2.0 * field.blob_sigma * field.blob_sigma));
      const double scale = 1.0 + w * field.blob_strain;
      const Mat2 rot = Mat2::rotation_deg(w * field.blob_rotation_deg);
      return rot * Mat2{scale, 0.0, 0.0, scale};
    }
  }
  fail(Errc::invalid_argument, "unknown field kind");
}

NbedGrid gen_nbed_grid(const NbedGridSpec& spec) {
  if (spec.scan_p < 1 || spec.scan_q < 1 || spec.rows < 1 || spec.cols < 1)
    fail(Errc::invalid_argument, "grid requires positive dimensions");
  if (spec.disk_radius <= 0.0) fail(Errc::invalid_argument, "disk radius must be > 0");

  const double cy = spec.rows / 2.0;
  const double cx = spec.cols / 2.0;

  NbedGrid out;
  out.grid = DiffractionGrid(spec.scan_p, spec.scan_q, spec.rows, spec.cols);
  out.grid.scan_step = spec.scan_step;
  out.truth.f.resize(static_cast<std::size_t>(spec.scan_p) * spec.scan_q);

  for (int p = 0; p < spec.scan_p; ++p)
    for (int q = 0; q < spec.scan_q; ++q)
      out.truth.f[out.grid.pattern_index(p, q)] = field_at(spec.field, p, q, spec.scan_p, spec.scan_q);

  parallel_for(out.truth.f.size(), [&](std::size_t unit) {
    const Mat2 f = out.truth.f[unit];
    const Mat2 ft_inv = f.transpose().inverse();

    std::vector<Vec2> positions;
    positions.push_back({cx, cy});
    for (const Vec2& g : spec.gref) {
      const Vec2 gm = ft_inv * g;
      positions.push_back({cx + gm.x, cy + gm.y});
    }
    for (std::size_t i = 0; i < positions.size(); ++i) {
      const auto& pos = positions[i];
      if (pos.x - spec.disk_radius < 0 || pos.x + spec.disk_radius > spec.cols - 1 ||
          pos.y - spec.disk_radius < 0 || pos.y + spec.disk_radius > spec.rows - 1)
        fail(Errc::disk_outside_image, "diffraction disk leaves the pattern");
      for (std::size_t j = i + 1; j < positions.size(); ++j) {
        const double gap = std::hypot(positions[i].x - positions[j].x,
                                      positions[i].y - positions[j].y);
        if (gap < 2.0 * spec.disk_radius) warn("diffraction disks overlap");
      }
    }

    Image pattern(spec.rows, spec.cols, 0.0);
    add_disk(pattern, positions[0].x, positions[0].y, spec.disk_radius, spec.center_intensity,
             spec.bullseye, spec.ring_count);
    for (std::size_t i = 1; i < positions.size(); ++i)
      add_disk(pattern, positions[i].x, positions[i].y, spec.disk_radius,
               spec.satellite_intensity, spec.bullseye, spec.ring_count);

    if (spec.background > 0.0) {
      GaussianStream bg(spec.seed, kStreamBackground | unit);
      const double f1 = 1.0 + 1.5 * bg.uniform(0);
      const double f2 = 1.0 + 1.5 * bg.uniform(1);
      const double ph1 = 2.0 * std::numbers::pi * bg.uniform(2);
      const double ph2 = 2.0 * std::numbers::pi * bg.uniform(3);
      for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c)
          pattern(r, c) += spec.background *
                           (2.0 + std::sin(2.0 * std::numbers::pi * f1 * c / spec.cols + ph1) +
                            std::sin(2.0 * std::numbers::pi * f2 * r / spec.rows + ph2));
    }

    if (spec.sigma > 0.0) {
      GaussianStream noise(spec.seed, kStreamPixelNoise | unit);
      std::uint64_t ctr = 0;
      for (int r = 0; r < spec.rows; ++r)
        for (int c = 0; c < spec.cols; ++c, ++ctr)
          pattern(r, c) = std::max(0.0, pattern(r, c) + spec.sigma * noise.normal(ctr));
    }

    const int p = static_cast<int>(unit) / spec.scan_q;
    const int q = static_cast<int>(unit) % spec.scan_q;
    out.grid.set_pattern(p, q, pattern);
  });

  return out;
}

DiskPair gen_disk_pair(const DiskPairSpec& spec) {
  if (spec.rows < 1 || spec.cols < 1)
    fail(Errc::invalid_argument, "disk pair requires positive dimensions");
  const double cy = spec.rows / 2.0;
  const double cx = spec.cols / 2.0;
  if (cx + spec.shift_x - spec.radius < 0 || cx + spec.shift_x + spec.radius > spec.cols - 1 ||
      cy + spec.shift_y - spec.radius < 0 || cy + spec.shift_y + spec.radius > spec.rows - 1)
    fail(Errc::disk_outside_image, "shifted disk leaves the image");

  DiskPair out;
  out.shift_x = spec.shift_x;
  out.shift_y = spec.shift_y;
  out.reference = Image(spec.rows, spec.cols, 0.0);
  out.shifted = Image(spec.rows, spec.cols, 0.0);
  add_disk(out.reference, cx, cy, spec.radius, spec.intensity, spec.bullseye, spec.ring_count);
  add_disk(out.shifted, cx + spec.shift_x, cy + spec.shift_y, spec.radius, spec.intensity,
           spec.bullseye, spec.ring_count);

  if (spec.background > 0.0) {
    GaussianStream bg(spec.seed, kStreamBackground);
    const double f1 = 1.0 + 1.5 * bg.uniform(0);
    const double f2 = 1.0 + 1.5 * bg.uniform(1);
    const double ph1 = 2.0 * std::numbers::pi * bg.uniform(2);
    const double ph2 = 2.0 * std::numbers::pi * bg.uniform(3);
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c)
        out.shifted(r, c) += spec.background *
                             (2.0 + std::sin(2.0 * std::numbers::pi * f1 * c / spec.cols + ph1) +
                              std::sin(2.0 * std::numbers::pi * f2 * r / spec.rows + ph2));
  }

  if (spec.sigma > 0.0) {
    GaussianStream n0(spec.seed, kStreamPixelNoise | 0);
    GaussianStream n1(spec.seed, kStreamPixelNoise | 1);
    std::uint64_t ctr = 0;
    for (int r = 0; r < spec.rows; ++r) {
      for (int c = 0; c < spec.cols; ++c, ++ctr) {
        out.reference(r, c) += spec.sigma * n0.normal(ctr);
        out.shifted(r, c) += spec.sigma * n1.normal(ctr);
      }
    }
  }
  return out;
}

}  // namespace temsig::synth
