#ifndef TEMSIG_POLAR_HPP
#define TEMSIG_POLAR_HPP

#include <cstdint>
#include <vector>

#include "temsig/types.hpp"

namespace temsig {

/// 1 where lo < value < hi (strict open interval), else 0.
Image threshold_band(const Image& image, double lo, double hi);

/// Gaussian blur -> Sobel gradients -> non-maximum suppression along the
/// gradient -> double-threshold hysteresis. Output is binary {0,1}.
Image canny_edges(const Image& image, double sigma, double low, double high);

struct CircleEstimate {
  double x = 0.0;  // column coordinate
  double y = 0.0;  // row coordinate
  double r = 0.0;
  double votes = 0.0;  // accumulator score at the winning bin
};

/// Accumulator over (x, y, r) at bin_size resolution; every edge pixel votes
/// for all centers at distance r. Argmax wins, ties broken by smallest r then
/// row-major center; the returned estimate is the centroid of the 3x3x3
/// accumulator neighborhood around the winner.
CircleEstimate hough_circle(const Image& edges, double r_min, double r_max,
                            double bin_size = 1.0);

struct PolarImage {
  int radial_bins = 0;
  int angular_bins = 0;
  double dr = 1.0;      // pixels per radial bin
  double dtheta = 1.0;  // degrees per angular bin; angular_bins * dtheta == 360
  double center_x = 0.0;
  double center_y = 0.0;
  std::vector<double> values;           // radial_bins x angular_bins, row = radius
  std::vector<std::uint32_t> coverage;  // contributing source pixels per bin

  std::size_t index(int rb, int tb) const {
    return static_cast<std::size_t>(rb) * angular_bins + tb;
  }
  double value(int rb, int tb) const { return values[index(rb, tb)]; }
  std::uint32_t cov(int rb, int tb) const { return coverage[index(rb, tb)]; }
};

/// Forward (scatter) binning: every unmasked source pixel lands in the bin
/// (floor(dist/dr), floor(angle/dtheta)); bin value is the mean of its
/// contributors, so sum(value * coverage) equals the unmasked source sum.
PolarImage to_polar(const Image& image, double center_x, double center_y, double dr,
                    double dtheta, const MaskImage* mask = nullptr);

struct BandSignal {
  std::vector<double> values;          // exactly 360, one per degree
  std::vector<std::uint8_t> filled;    // 1 where a zero-coverage degree took its neighbors' mean
  double r0 = 0.0;
  double width = 0.0;
};

/// Coverage-weighted per-degree mean over the radial bins spanning
/// [r0, r0 + w_r]. Zero-coverage degrees carry the mean of their nearest
/// covered neighbors and are flagged.
BandSignal band_signal(const PolarImage& polar, double r0, double w_r);

/// Largest connected low-intensity region (threshold_band(lo,hi), 8-connected)
/// touching the image border; empty mask when none touches the border.
MaskImage derive_beamstop_mask(const Image& image, double lo, double hi);

struct SignalPipelineConfig {
  double canny_sigma = 2.0;
  double canny_low = 0.05;
  double canny_high = 0.15;
  double r_min = 5.0;
  double r_max = 60.0;
  double hough_bin = 1.0;
  double dr = 1.0;
  double dtheta = 1.0;
  double band_r0 = 0.0;
  double band_width = 3.0;
  bool align = true;  // Hough center per frame; geometric center otherwise
  const MaskImage* mask = nullptr;
};

struct SignalResult {
  std::vector<std::vector<double>> signals;  // T rows x 360 columns
  std::vector<CircleEstimate> centers;       // per-frame alignment results
};

/// Per frame: center alignment (circle Hough on Canny edges), polar
/// transform, band extraction. Row t feeds the change-point detector.
SignalResult pattern_sequence_to_signals(const VideoStack& stack,
                                         const SignalPipelineConfig& config);

}  // namespace temsig

#endif
