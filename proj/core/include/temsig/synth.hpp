#ifndef TEMSIG_SYNTH_HPP
#define TEMSIG_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "temsig/types.hpp"

namespace temsig::synth {

/// Disk rendering shared by the generators and the registration reference:
/// a hard-edged disk softened by a 1-pixel Gaussian edge; bullseye disks are
/// modulated by ring_count equal-width annuli of alternating {1, 0.2}
/// intensity. ring_count == 1 degenerates to the flat disk.
double disk_profile(double dist, double radius);
double bullseye_factor(double dist, double radius, int ring_count);
void add_disk(Image& img, double x, double y, double radius, double intensity,
              bool bullseye = false, int ring_count = 1);

// ---------------------------------------------------------------------------
// corrosion_video

struct CorrosionVideoSpec {
  int rows = 64, cols = 64, frames = 100;
  double base = 1.0;
  double delta = 1.0;             // step height of a corroded pixel, > 0
  double sigma = 0.0;             // Gaussian pixel noise
  double drift_amplitude = 0.0;   // smooth global brightness fluctuation
  double front_row = -1.0;        // seed point; negative -> frame center
  double front_col = -1.0;
  double rho0 = 0.0;              // front radius at t = 0 (px)
  double speed = 0.0;             // front growth (px per frame)
  std::optional<double> frame_interval;
  std::optional<double> pixel_size;
  std::uint64_t seed = 0;
};

struct CorrosionTruth {
  /// First frame index at which each pixel is corroded; +inf where never.
  Image onset_frame;
  std::vector<double> drift;  // per-frame global drift values
  double base = 0.0;
  double delta = 0.0;
};

struct CorrosionVideo {
  VideoStack stack;
  CorrosionTruth truth;
};

/// video = base + delta * [onset <= t] + drift(t) + noise. A pixel is corroded
/// at frame t when its distance to the seed point is < rho0 + speed * t.
CorrosionVideo gen_corrosion_video(const CorrosionVideoSpec& spec);

// ---------------------------------------------------------------------------
// ring_pattern

struct RingSpec {
  double radius = 20.0;
  double intensity = 1.0;
  double width = 1.5;  // Gaussian radial profile sigma
};

struct SpotSpec {
  double radius = 25.0;
  double angle_deg = 0.0;  // atan2(row - cy, col - cx) convention, degrees
  double intensity = 0.1;
  double width = 1.0;
};

struct NeedleSpec {
  double angle_deg = 90.0;   // direction of the needle from the center
  double half_width = 2.0;   // px
};

struct RingPatternSpec {
  int rows = 128, cols = 128;
  double center_row = -1.0;  // negative -> geometric center; fractional allowed
  double center_col = -1.0;
  double center_intensity = 1.0;
  double center_width = 3.0;
  std::vector<RingSpec> rings;
  std::vector<SpotSpec> spots;
  std::optional<NeedleSpec> needle;
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

struct RingPatternTruth {
  double center_row = 0.0, center_col = 0.0;
  std::vector<RingSpec> rings;
  std::vector<SpotSpec> spots;
  MaskImage mask;  // true where the needle shadow zeroed the image
};

struct RingPattern {
  Image image;
  RingPatternTruth truth;
};

/// Bright central Gaussian peak + Gaussian-profile rings + low-intensity
/// spots; the needle region is zeroed after composition.
RingPattern gen_ring_pattern(const RingPatternSpec& spec);

// ---------------------------------------------------------------------------
// sparse_stream

struct SparseStreamSpec {
  int d = 1;
  int length = 1;
  long change_point = 0;  // nu: samples 1..nu are N(0,I), nu+1.. are N(theta,I)
  int support = 0;        // s*: number of non-zero coordinates of theta
  double magnitude = 0.0; // mu: value of each non-zero coordinate
  std::uint64_t seed = 0;
};

struct SparseStream {
  std::vector<std::vector<double>> samples;  // length entries of d values
  long change_point = 0;
  std::vector<double> theta;
};

SparseStream gen_sparse_stream(const SparseStreamSpec& spec);

// ---------------------------------------------------------------------------
// nbed_grid

enum class FieldKind { constant, ramp, blob };

struct FieldSpec {
  FieldKind kind = FieldKind::constant;
  Mat2 f0 = Mat2::identity();       // constant field value / ramp base
  Mat2 ramp_p{0, 0, 0, 0};          // added per unit normalized scan row
  Mat2 ramp_q{0, 0, 0, 0};
  double blob_strain = 0.0;         // isotropic strain at the blob peak
  double blob_rotation_deg = 0.0;   // rotation at the blob peak
  double blob_p = -1.0;             // blob center; negative -> grid center
  double blob_q = -1.0;
  double blob_sigma = 2.0;          // scan-point units
};

struct NbedGridSpec {
  int scan_p = 8, scan_q = 8;
  int rows = 64, cols = 64;
  std::vector<Vec2> gref;           // reference g-vectors, px offsets from center
  FieldSpec field;
  bool bullseye = false;
  int ring_count = 4;
  double disk_radius = 6.0;
  double center_intensity = 3.0;
  double satellite_intensity = 1.0;
  double sigma = 0.0;               // additive noise, clamped at 0
  double background = 0.0;          // low-frequency background amplitude
  std::optional<double> scan_step;
  std::uint64_t seed = 0;
};

struct NbedGridTruth {
  std::vector<Mat2> f;  // P*Q row-major deformation gradients
};

struct NbedGrid {
  DiffractionGrid grid;
  NbedGridTruth truth;
};

/// Each pattern holds the central disk plus satellites at g = F^{-T} g_ref.
Mat2 field_at(const FieldSpec& field, int p, int q, int scan_p, int scan_q);
NbedGrid gen_nbed_grid(const NbedGridSpec& spec);

// ---------------------------------------------------------------------------
// disk_pair

struct DiskPairSpec {
  int rows = 64, cols = 64;
  bool bullseye = false;
  int ring_count = 4;
  double radius = 8.0;
  double intensity = 1.0;
  double shift_x = 0.0, shift_y = 0.0;  // true subpixel shift of the second image
  double sigma = 0.0;
  double background = 0.0;              // low-frequency background on both images
  std::uint64_t seed = 0;
};

struct DiskPair {
  Image reference;
  Image shifted;
  double shift_x = 0.0, shift_y = 0.0;
};

DiskPair gen_disk_pair(const DiskPairSpec& spec);

}  // namespace temsig::synth

#endif
