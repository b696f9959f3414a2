#include "temsig/segment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "temsig/errors.hpp"
#include "temsig/parallel.hpp"

namespace temsig {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

LabelVideo::LabelVideo(int frames_, int rows_, int cols_)
    : frames(frames_),
      rows(rows_),
      cols(cols_),
      labels(static_cast<std::size_t>(frames_) * rows_ * cols_, 0) {}

Volume forward_difference(const VideoStack& stack) {
  stack.validate();
  if (stack.frames < 2) fail(Errc::too_few_frames, "forward difference needs T >= 2");
  Volume diff(stack.frames - 1, stack.rows, stack.cols);
  const std::size_t per_frame = static_cast<std::size_t>(stack.rows) * stack.cols;
  parallel_for(static_cast<std::size_t>(stack.frames - 1), [&](std::size_t t) {
    const std::size_t base = t * per_frame;
    for (std::size_t i = 0; i < per_frame; ++i) {
      diff.data()[base + i] = static_cast<double>(stack.data[base + per_frame + i]) -
                              static_cast<double>(stack.data[base + i]);
    }
  });
  return diff;
}

double quantile_threshold(std::vector<double> values, double q) {
  if (values.empty()) fail(Errc::empty_input, "quantile of empty set");
  if (!(q > 0.0 && q < 1.0)) fail(Errc::invalid_argument, "quantile must be in (0,1)");
  const std::size_t n = values.size();
  const std::size_t rank =
      static_cast<std::size_t>(std::ceil(q * static_cast<double>(n))) - 1;
  std::nth_element(values.begin(), values.begin() + rank, values.end());
  return values[rank];
}

double quantile_threshold(const Volume& diff, double q) {
  return quantile_threshold(std::vector<double>(diff.data().begin(), diff.data().end()), q);
}

std::pair<OnsetState, LabelVideo> label_onset(const Volume& diff, double threshold,
                                              double quantile) {
  if (!std::isfinite(threshold)) fail(Errc::invalid_argument, "threshold must be finite");
  OnsetState state;
  state.steps = diff.frames();
  state.rows = diff.rows();
  state.cols = diff.cols();
  state.threshold = threshold;
  state.quantile = quantile;
  state.s.resize(diff.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    state.s[i] = diff.data()[i] > threshold ? 1 : 0;

  LabelVideo labels(diff.frames() + 1, diff.rows(), diff.cols());
  const std::size_t per_frame = static_cast<std::size_t>(diff.rows()) * diff.cols();
  // frame 0 is all uncorroded; every later frame ORs in the previous step
  for (int t = 1; t < labels.frames; ++t) {
    const std::size_t out = static_cast<std::size_t>(t) * per_frame;
    const std::size_t prev = out - per_frame;
    for (std::size_t i = 0; i < per_frame; ++i)
      labels.labels[out + i] = labels.labels[prev + i] | state.s[prev + i];
  }
  return {std::move(state), std::move(labels)};
}

LabelVideo majority_smooth(const LabelVideo& labels, int radius, double fraction) {
  if (radius < 1) fail(Errc::invalid_argument, "smoothing radius must be >= 1");
  if (!(fraction > 0.0 && fraction < 1.0))
    fail(Errc::invalid_argument, "smoothing fraction must be in (0,1)");

  LabelVideo out = labels;
  parallel_for(static_cast<std::size_t>(labels.frames), [&](std::size_t ti) {
    const int t = static_cast<int>(ti);
    for (int r = 0; r < labels.rows; ++r) {
      for (int c = 0; c < labels.cols; ++c) {
        const std::uint8_t own = labels.at(t, r, c);
        int neighbors = 0;
        int opposite = 0;
        for (int dr = -radius; dr <= radius; ++dr) {
          for (int dc = -radius; dc <= radius; ++dc) {
            if (dr == 0 && dc == 0) continue;
            const int rr = r + dr;
            const int cc = c + dc;
            if (rr < 0 || rr >= labels.rows || cc < 0 || cc >= labels.cols) continue;
            ++neighbors;
            if (labels.at(t, rr, cc) != own) ++opposite;
          }
        }
        if (neighbors > 0 && opposite > fraction * neighbors)
          out.set(t, r, c, own ? 0 : 1);
      }
    }
  });
  return out;
}

CorrosionStats corrosion_stats(const LabelVideo& labels, std::optional<double> frame_interval,
                               std::optional<double> pixel_size) {
  const double dt = frame_interval.value_or(1.0);
  const double scale = pixel_size.value_or(1.0);
  const std::size_t per_frame = static_cast<std::size_t>(labels.rows) * labels.cols;

  // re-monotonize: smoothing is per-frame and may have broken irreversibility
  LabelVideo mono = labels;
  for (int t = 1; t < mono.frames; ++t) {
    const std::size_t base = static_cast<std::size_t>(t) * per_frame;
    for (std::size_t i = 0; i < per_frame; ++i)
      mono.labels[base + i] |= mono.labels[base - per_frame + i];
  }

  CorrosionStats stats;
  stats.area_fraction.resize(mono.frames);
  for (int t = 0; t < mono.frames; ++t) {
    std::size_t count = 0;
    const std::size_t base = static_cast<std::size_t>(t) * per_frame;
    for (std::size_t i = 0; i < per_frame; ++i) count += mono.labels[base + i];
    stats.area_fraction[t] = static_cast<double>(count) / static_cast<double>(per_frame);
  }

  stats.onset_time = Image(labels.rows, labels.cols, kInf);
  for (int r = 0; r < labels.rows; ++r) {
    for (int c = 0; c < labels.cols; ++c) {
      for (int t = 0; t < mono.frames; ++t) {
        if (mono.at(t, r, c)) {
          stats.onset_time(r, c) = t * dt;
          break;
        }
      }
    }
  }

  // velocity = scale / |grad onset|; central differences with one-sided
  // fallback; 0 where the gradient is undefined or ~0, or the pixel never
  // corroded.
  stats.velocity = Image(labels.rows, labels.cols, 0.0);
  const auto& tau = stats.onset_time;
  auto finite_at = [&](int r, int c) {
    return tau.in_bounds(r, c) && std::isfinite(tau(r, c));
  };
  auto directional = [&](int r, int c, int dr, int dc, double& out) {
    const bool lo = finite_at(r - dr, c - dc);
    const bool hi = finite_at(r + dr, c + dc);
    if (lo && hi) {
      out = (tau(r + dr, c + dc) - tau(r - dr, c - dc)) / 2.0;
      return true;
    }
    if (hi) {
      out = tau(r + dr, c + dc) - tau(r, c);
      return true;
    }
    if (lo) {
      out = tau(r, c) - tau(r - dr, c - dc);
      return true;
    }
    return false;
  };
  for (int r = 0; r < labels.rows; ++r) {
    for (int c = 0; c < labels.cols; ++c) {
      if (!std::isfinite(tau(r, c))) continue;
      double gr = 0.0, gc = 0.0;
      if (!directional(r, c, 1, 0, gr)) continue;
      if (!directional(r, c, 0, 1, gc)) continue;
      const double norm = std::hypot(gr, gc);
      if (norm < 1e-9) continue;
      stats.velocity(r, c) = scale / norm;
    }
  }
  return stats;
}

}  // namespace temsig
