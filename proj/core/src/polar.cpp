#include "temsig/polar.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>

#include "temsig/errors.hpp"
#include "temsig/nbed.hpp"
#include "temsig/parallel.hpp"

namespace temsig {

namespace {

Image gaussian_blur(const Image& image, double sigma) {
  const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
  std::vector<double> kernel(2 * radius + 1);
  for (int i = -radius; i <= radius; ++i)
    kernel[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));

  // separable passes, kernel truncated and renormalized at the borders
  Image tmp(image.rows(), image.cols());
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      double acc = 0.0, wsum = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int cc = c + i;
        if (cc < 0 || cc >= image.cols()) continue;
        acc += kernel[i + radius] * image(r, cc);
        wsum += kernel[i + radius];
      }
      tmp(r, c) = acc / wsum;
    }
  }
  Image out(image.rows(), image.cols());
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      double acc = 0.0, wsum = 0.0;
      for (int i = -radius; i <= radius; ++i) {
        const int rr = r + i;
        if (rr < 0 || rr >= image.rows()) continue;
        acc += kernel[i + radius] * tmp(rr, c);
        wsum += kernel[i + radius];
      }
      out(r, c) = acc / wsum;
    }
  }
  return out;
}

}  // namespace

Image threshold_band(const Image& image, double lo, double hi) {
  if (!(lo < hi)) fail(Errc::invalid_argument, "threshold band requires lo < hi");
  Image out(image.rows(), image.cols());
  for (std::size_t i = 0; i < image.size(); ++i) {
    const double v = image.data()[i];
    out.data()[i] = (v > lo && v < hi) ? 1.0 : 0.0;
  }
  return out;
}

Image canny_edges(const Image& image, double sigma, double low, double high) {
  if (!(sigma > 0.0)) fail(Errc::invalid_argument, "canny sigma must be > 0");
  if (!(low > 0.0 && low < high)) fail(Errc::invalid_argument, "canny requires 0 < low < high");

  const Image blurred = gaussian_blur(image, sigma);
  Image gx, gy;
  sobel_gradients(blurred, gx, gy);

  const int rows = image.rows();
  const int cols = image.cols();
  Image mag(rows, cols);
  for (std::size_t i = 0; i < mag.size(); ++i)
    mag.data()[i] = std::hypot(gx.data()[i], gy.data()[i]);

  // non-maximum suppression along the quantized gradient direction
  Image thin(rows, cols, 0.0);
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const double m = mag(r, c);
      if (m <= 0.0) continue;
      const double angle = std::atan2(gy(r, c), gx(r, c));
      // sector in {0: E-W, 1: NE-SW, 2: N-S, 3: NW-SE}
      const int sector =
          static_cast<int>(std::lround(angle / (std::numbers::pi / 4.0))) & 3;
      static constexpr int kDr[4] = {0, 1, 1, 1};
      static constexpr int kDc[4] = {1, 1, 0, -1};
      const int dr = kDr[sector];
      const int dc = kDc[sector];
      const double m1 = mag.in_bounds(r + dr, c + dc) ? mag(r + dr, c + dc) : 0.0;
      const double m2 = mag.in_bounds(r - dr, c - dc) ? mag(r - dr, c - dc) : 0.0;
      if (m >= m1 && m >= m2) thin(r, c) = m;
    }
  }

  // double threshold + hysteresis (8-connected BFS from strong pixels)
  Image edges(rows, cols, 0.0);
  std::deque<std::pair<int, int>> queue;
  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      if (thin(r, c) >= high) {
        edges(r, c) = 1.0;
        queue.emplace_back(r, c);
      }
    }
  }
  while (!queue.empty()) {
    const auto [r, c] = queue.front();
    queue.pop_front();
    for (int dr = -1; dr <= 1; ++dr) {
      for (int dc = -1; dc <= 1; ++dc) {
        const int rr = r + dr;
        const int cc = c + dc;
        if (!edges.in_bounds(rr, cc) || edges(rr, cc) != 0.0) continue;
        if (thin(rr, cc) >= low) {
          edges(rr, cc) = 1.0;
          queue.emplace_back(rr, cc);
        }
      }
    }
  }
  return edges;
}

CircleEstimate hough_circle(const Image& edges, double r_min, double r_max, double bin_size) {
  if (r_min < 1.0) fail(Errc::invalid_argument, "hough r_min must be >= 1");
  if (!(r_max >= r_min)) fail(Errc::invalid_argument, "hough requires r_max >= r_min");
  if (!(bin_size > 0.0)) fail(Errc::invalid_argument, "hough bin size must be > 0");

  std::vector<std::pair<int, int>> points;
  for (int r = 0; r < edges.rows(); ++r)
    for (int c = 0; c < edges.cols(); ++c)
      if (edges(r, c) != 0.0) points.emplace_back(r, c);
  if (points.empty()) fail(Errc::no_edges, "no edge pixels to vote with");

  const int nx = static_cast<int>(std::floor((edges.cols() - 1) / bin_size)) + 1;
  const int ny = static_cast<int>(std::floor((edges.rows() - 1) / bin_size)) + 1;
  const int nr = static_cast<int>(std::floor((r_max - r_min) / bin_size)) + 1;

  std::vector<std::vector<std::uint32_t>> slabs(
      nr, std::vector<std::uint32_t>(static_cast<std::size_t>(nx) * ny, 0));

  // one slab per radius keeps the parallel vote deterministic
  parallel_for(static_cast<std::size_t>(nr), [&](std::size_t ri) {
    auto& acc = slabs[ri];
    const double radius = r_min + static_cast<double>(ri) * bin_size;
    const int steps = std::max<int>(16, static_cast<int>(
        std::ceil(2.0 * std::numbers::pi * radius / (bin_size * 0.5))));
    for (const auto& [py, px] : points) {
      int last = -1;
      for (int s = 0; s < steps; ++s) {
        const double phi = 2.0 * std::numbers::pi * s / steps;
        const double cx = px + radius * std::cos(phi);
        const double cy = py + radius * std::sin(phi);
        if (cx < 0.0 || cy < 0.0) continue;
        const int bx = static_cast<int>(cx / bin_size);
        const int by = static_cast<int>(cy / bin_size);
        if (bx >= nx || by >= ny) continue;
        const int bin = by * nx + bx;
        if (bin == last) continue;  // consecutive samples in the same bin vote once
        acc[bin] += 1;
        last = bin;
      }
    }
  });

  std::uint32_t best = 0;
  int best_r = 0, best_y = 0, best_x = 0;
  for (int ri = 0; ri < nr; ++ri) {
    const auto& acc = slabs[ri];
    for (int by = 0; by < ny; ++by) {
      for (int bx = 0; bx < nx; ++bx) {
        const std::uint32_t v = acc[static_cast<std::size_t>(by) * nx + bx];
        if (v > best) {
          best = v;
          best_r = ri;
          best_y = by;
          best_x = bx;
        }
      }
    }
  }

  // centroid of the 3x3x3 neighborhood around the argmax
  double wsum = 0.0, xs = 0.0, ys = 0.0, rs = 0.0;
  for (int dri = -1; dri <= 1; ++dri) {
    const int ri = best_r + dri;
    if (ri < 0 || ri >= nr) continue;
    for (int dy = -1; dy <= 1; ++dy) {
      const int by = best_y + dy;
      if (by < 0 || by >= ny) continue;
      for (int dx = -1; dx <= 1; ++dx) {
        const int bx = best_x + dx;
        if (bx < 0 || bx >= nx) continue;
        const double w = slabs[ri][static_cast<std::size_t>(by) * nx + bx];
        wsum += w;
        xs += w * bx;
        ys += w * by;
        rs += w * ri;
      }
    }
  }

  CircleEstimate est;
  est.votes = best;
  if (wsum > 0.0) {
    est.x = (xs / wsum) * bin_size;
    est.y = (ys / wsum) * bin_size;
    est.r = r_min + (rs / wsum) * bin_size;
  } else {
    est.x = best_x * bin_size;
    est.y = best_y * bin_size;
    est.r = r_min + best_r * bin_size;
  }
  est.x = std::clamp(est.x, 0.0, edges.cols() - 1.0);
  est.y = std::clamp(est.y, 0.0, edges.rows() - 1.0);
  return est;
}

PolarImage to_polar(const Image& image, double center_x, double center_y, double dr,
                    double dtheta, const MaskImage* mask) {
  if (!(dr > 0.0)) fail(Errc::invalid_argument, "dr must be > 0");
  const double bins = 360.0 / dtheta;
  if (!(dtheta > 0.0) || std::abs(bins - std::round(bins)) > 1e-9)
    fail(Errc::invalid_argument, "dtheta must divide 360");
  if (center_x < 0.0 || center_x > image.cols() - 1.0 || center_y < 0.0 ||
      center_y > image.rows() - 1.0)
    fail(Errc::center_outside_image, "polar center outside the image");
  if (mask && (mask->rows != image.rows() || mask->cols != image.cols()))
    fail(Errc::dimension_mismatch, "mask dimensions do not match image");

  PolarImage polar;
  polar.dr = dr;
  polar.dtheta = dtheta;
  polar.center_x = center_x;
  polar.center_y = center_y;
  polar.angular_bins = static_cast<int>(std::round(bins));

  const double max_dist = std::max({std::hypot(center_x, center_y),
                                    std::hypot(image.cols() - 1 - center_x, center_y),
                                    std::hypot(center_x, image.rows() - 1 - center_y),
                                    std::hypot(image.cols() - 1 - center_x,
                                               image.rows() - 1 - center_y)});
  polar.radial_bins = static_cast<int>(std::floor(max_dist / dr)) + 1;
  polar.values.assign(static_cast<std::size_t>(polar.radial_bins) * polar.angular_bins, 0.0);
  polar.coverage.assign(polar.values.size(), 0);

  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      if (mask && mask->at(r, c)) continue;
      const double dy = r - center_y;
      const double dx = c - center_x;
      const double dist = std::hypot(dx, dy);
      double angle = std::atan2(dy, dx) * 180.0 / std::numbers::pi;
      if (angle < 0.0) angle += 360.0;
      int rb = static_cast<int>(dist / dr);
      if (rb >= polar.radial_bins) rb = polar.radial_bins - 1;
      int tb = static_cast<int>(angle / dtheta);
      if (tb >= polar.angular_bins) tb = polar.angular_bins - 1;
      const std::size_t idx = polar.index(rb, tb);
      polar.values[idx] += image(r, c);
      polar.coverage[idx] += 1;
    }
  }
  for (std::size_t i = 0; i < polar.values.size(); ++i)
    if (polar.coverage[i] > 0) polar.values[i] /= polar.coverage[i];
  return polar;
}

BandSignal band_signal(const PolarImage& polar, double r0, double w_r) {
  if (!(w_r >= 0.0) || r0 < 0.0 || (r0 + w_r) / polar.dr >= polar.radial_bins + 1.0)
    fail(Errc::band_outside_range, "band does not fit the polar range");
  const int rb_lo = static_cast<int>(r0 / polar.dr);
  int rb_hi = static_cast<int>((r0 + w_r) / polar.dr);
  if (rb_hi >= polar.radial_bins) rb_hi = polar.radial_bins - 1;
  if (rb_lo > rb_hi) fail(Errc::band_outside_range, "empty radial band");

  BandSignal sig;
  sig.r0 = r0;
  sig.width = w_r;
  sig.values.assign(360, 0.0);
  sig.filled.assign(360, 0);
  std::vector<double> wsum(360, 0.0);

  if (polar.dtheta <= 1.0) {
    // several angular bins per degree
    for (int tb = 0; tb < polar.angular_bins; ++tb) {
      const int deg = std::min(359, static_cast<int>(tb * polar.dtheta));
      for (int rb = rb_lo; rb <= rb_hi; ++rb) {
        const std::uint32_t cov = polar.cov(rb, tb);
        sig.values[deg] += polar.value(rb, tb) * cov;
        wsum[deg] += cov;
      }
    }
  } else {
    // one angular bin spans several degrees
    for (int deg = 0; deg < 360; ++deg) {
      const int tb = std::min(polar.angular_bins - 1,
                              static_cast<int>(deg / polar.dtheta));
      for (int rb = rb_lo; rb <= rb_hi; ++rb) {
        const std::uint32_t cov = polar.cov(rb, tb);
        sig.values[deg] += polar.value(rb, tb) * cov;
        wsum[deg] += cov;
      }
    }
  }

  for (int deg = 0; deg < 360; ++deg) {
    if (wsum[deg] > 0.0) sig.values[deg] /= wsum[deg];
  }
  // zero-coverage degrees carry the mean of their nearest covered neighbors
  for (int deg = 0; deg < 360; ++deg) {
    if (wsum[deg] > 0.0) continue;
    sig.filled[deg] = 1;
    double lo_v = 0.0, hi_v = 0.0;
    bool has_lo = false, has_hi = false;
    for (int k = 1; k < 360; ++k) {
      const int j = (deg - k + 720) % 360;
      if (wsum[j] > 0.0) {
        lo_v = sig.values[j];
        has_lo = true;
        break;
      }
    }
    for (int k = 1; k < 360; ++k) {
      const int j = (deg + k) % 360;
      if (wsum[j] > 0.0) {
        hi_v = sig.values[j];
        has_hi = true;
        break;
      }
    }
    if (has_lo && has_hi)
      sig.values[deg] = (lo_v + hi_v) / 2.0;
    else if (has_lo)
      sig.values[deg] = lo_v;
    else if (has_hi)
      sig.values[deg] = hi_v;
  }
  return sig;
}

MaskImage derive_beamstop_mask(const Image& image, double lo, double hi) {
  const Image band = threshold_band(image, lo, hi);
  const int rows = image.rows();
  const int cols = image.cols();
  std::vector<int> component(static_cast<std::size_t>(rows) * cols, -1);
  int n_components = 0;
  std::vector<std::size_t> sizes;
  std::vector<bool> touches_border;

  for (int r = 0; r < rows; ++r) {
    for (int c = 0; c < cols; ++c) {
      const std::size_t idx = static_cast<std::size_t>(r) * cols + c;
      if (band.data()[idx] == 0.0 || component[idx] >= 0) continue;
      const int id = n_components++;
      sizes.push_back(0);
      touches_border.push_back(false);
      std::deque<std::pair<int, int>> queue{{r, c}};
      component[idx] = id;
      while (!queue.empty()) {
        const auto [cr, cc] = queue.front();
        queue.pop_front();
        ++sizes[id];
        if (cr == 0 || cr == rows - 1 || cc == 0 || cc == cols - 1) touches_border[id] = true;
        for (int dr = -1; dr <= 1; ++dr) {
          for (int dc = -1; dc <= 1; ++dc) {
            const int rr = cr + dr;
            const int ccc = cc + dc;
            if (rr < 0 || rr >= rows || ccc < 0 || ccc >= cols) continue;
            const std::size_t j = static_cast<std::size_t>(rr) * cols + ccc;
            if (band.data()[j] == 0.0 || component[j] >= 0) continue;
            component[j] = id;
            queue.emplace_back(rr, ccc);
          }
        }
      }
    }
  }

  int winner = -1;
  std::size_t best_size = 0;
  for (int id = 0; id < n_components; ++id) {
    if (touches_border[id] && sizes[id] > best_size) {
      best_size = sizes[id];
      winner = id;
    }
  }

  MaskImage mask(rows, cols, false);
  if (winner < 0) {
    warn("no low-intensity region touches the border; beam-stop mask is empty");
    return mask;
  }
  for (std::size_t i = 0; i < component.size(); ++i)
    if (component[i] == winner) mask.bits[i] = 1;
  return mask;
}

SignalResult pattern_sequence_to_signals(const VideoStack& stack,
                                         const SignalPipelineConfig& config) {
  stack.validate();
  SignalResult result;
  result.signals.assign(stack.frames, {});
  result.centers.assign(stack.frames, {});

  parallel_for(static_cast<std::size_t>(stack.frames), [&](std::size_t t) {
    const Image img = stack.frame(static_cast<int>(t));
    CircleEstimate center;
    if (config.align) {
      const Image edges = canny_edges(img, config.canny_sigma, config.canny_low,
                                      config.canny_high);
      center = hough_circle(edges, config.r_min, config.r_max, config.hough_bin);
    } else {
      center.x = (stack.cols - 1) / 2.0;
      center.y = (stack.rows - 1) / 2.0;
    }
    const PolarImage polar =
        to_polar(img, center.x, center.y, config.dr, config.dtheta, config.mask);
    BandSignal sig = band_signal(polar, config.band_r0, config.band_width);
    result.centers[t] = center;
    result.signals[t] = std::move(sig.values);
  });
  return result;
}

}  // namespace temsig
