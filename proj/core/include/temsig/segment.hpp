#ifndef TEMSIG_SEGMENT_HPP
#define TEMSIG_SEGMENT_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "temsig/types.hpp"

namespace temsig {

/// Binary label video, 1 = corroded. Labels produced by label_onset are
/// temporally monotone (cumulative); smoothing may break that per frame and
/// stats re-monotonize before extracting onset times.
struct LabelVideo {
  int frames = 0;
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> labels;

  LabelVideo() = default;
  LabelVideo(int frames, int rows, int cols);

  std::size_t index(int t, int r, int c) const {
    return (static_cast<std::size_t>(t) * rows + r) * cols + c;
  }
  std::uint8_t at(int t, int r, int c) const { return labels[index(t, r, c)]; }
  void set(int t, int r, int c, std::uint8_t v) { labels[index(t, r, c)] = v; }
};

/// Per-step switch events: S[t] is true when the forward difference at step t
/// exceeds the threshold.
struct OnsetState {
  int steps = 0;  // T - 1
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> s;
  double threshold = 0.0;
  double quantile = 0.0;

  std::size_t index(int t, int r, int c) const {
    return (static_cast<std::size_t>(t) * rows + r) * cols + c;
  }
  std::uint8_t at(int t, int r, int c) const { return s[index(t, r, c)]; }
};

struct CorrosionStats {
  std::vector<double> area_fraction;  // per frame, non-decreasing
  Image onset_time;                   // seconds (or frames); +inf where never corroded
  Image velocity;                     // nm/s when pixel_size set, else px/s; 0 where undefined
};

/// Delta(X)[t] = X[t+1] - X[t]. Requires T >= 2.
Volume forward_difference(const VideoStack& stack);

/// Nearest-rank quantile over all values: sorted ascending, element at index
/// ceil(q*n) - 1.
double quantile_threshold(const Volume& diff, double q = 0.99);
double quantile_threshold(std::vector<double> values, double q);

/// S[t] = diff[t] > threshold; labels are the cumulative OR of S with frame 0
/// all zero (switches are irreversible).
std::pair<OnsetState, LabelVideo> label_onset(const Volume& diff, double threshold,
                                              double quantile = 0.0);

/// Synchronous single pass per frame: a pixel's label flips when strictly
/// more than `fraction` of its in-bounds neighbors (center excluded,
/// chebyshev radius r) hold the opposite label.
LabelVideo majority_smooth(const LabelVideo& labels, int radius = 1, double fraction = 0.5);

/// Area fraction, onset-time map and front-speed map (1 / |grad onset| by
/// central differences, one-sided at borders). Labels are re-monotonized by
/// cumulative OR first.
CorrosionStats corrosion_stats(const LabelVideo& labels,
                               std::optional<double> frame_interval = std::nullopt,
                               std::optional<double> pixel_size = std::nullopt);

}  // namespace temsig

#endif
