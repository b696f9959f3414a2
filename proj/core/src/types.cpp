#include "temsig/types.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "temsig/errors.hpp"

namespace temsig {

Image::Image(int rows, int cols, double fill)
    : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows) * cols, fill) {
  if (rows < 0 || cols < 0) fail(Errc::invalid_argument, "negative image dimensions");
}

double Image::min() const { return *std::min_element(data_.begin(), data_.end()); }
double Image::max() const { return *std::max_element(data_.begin(), data_.end()); }

double Image::sum() const {
  double acc = 0.0;
  for (double v : data_) acc += v;
  return acc;
}

bool Image::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); });
}

Volume::Volume(int frames, int rows, int cols, double fill)
    : frames_(frames),
      rows_(rows),
      cols_(cols),
      data_(static_cast<std::size_t>(frames) * rows * cols, fill) {
  if (frames < 0 || rows < 0 || cols < 0) fail(Errc::invalid_argument, "negative volume dimensions");
}

VideoStack::VideoStack(int frames_, int rows_, int cols_, float fill)
    : frames(frames_),
      rows(rows_),
      cols(cols_),
      data(static_cast<std::size_t>(frames_) * rows_ * cols_, fill) {}

Image VideoStack::frame(int t) const {
  Image img(rows, cols);
  const std::size_t base = static_cast<std::size_t>(t) * rows * cols;
  for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = data[base + i];
  return img;
}

void VideoStack::set_frame(int t, const Image& img) {
  if (img.rows() != rows || img.cols() != cols)
    fail(Errc::dimension_mismatch, "frame shape does not match stack");
  const std::size_t base = static_cast<std::size_t>(t) * rows * cols;
  for (std::size_t i = 0; i < img.size(); ++i) data[base + i] = static_cast<float>(img.data()[i]);
}

void VideoStack::validate() const {
  if (frames < 1 || rows < 1 || cols < 1)
    fail(Errc::dimension_mismatch, "stack requires T, M, N >= 1");
  if (data.size() != static_cast<std::size_t>(frames) * rows * cols)
    fail(Errc::dimension_mismatch, "payload size does not match T*M*N");
  if (frame_interval && *frame_interval <= 0.0)
    fail(Errc::invalid_argument, "frame_interval must be positive");
  for (float v : data)
    if (!std::isfinite(v)) fail(Errc::non_finite_data, "stack contains NaN or Inf");
}

MaskImage::MaskImage(int rows_, int cols_, bool fill)
    : rows(rows_), cols(cols_), bits(static_cast<std::size_t>(rows_) * cols_, fill ? 1 : 0) {}

std::size_t MaskImage::count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

DiffractionGrid::DiffractionGrid(int scan_p_, int scan_q_, int rows_, int cols_, float fill)
    : scan_p(scan_p_),
      scan_q(scan_q_),
      rows(rows_),
      cols(cols_),
      data(static_cast<std::size_t>(scan_p_) * scan_q_ * rows_ * cols_, fill) {}

Image DiffractionGrid::pattern(int p, int q) const {
  Image img(rows, cols);
  const std::size_t base = pattern_index(p, q) * rows * cols;
  for (std::size_t i = 0; i < img.size(); ++i) img.data()[i] = data[base + i];
  return img;
}

void DiffractionGrid::set_pattern(int p, int q, const Image& img) {
  if (img.rows() != rows || img.cols() != cols)
    fail(Errc::dimension_mismatch, "pattern shape does not match grid");
  const std::size_t base = pattern_index(p, q) * rows * cols;
  for (std::size_t i = 0; i < img.size(); ++i) data[base + i] = static_cast<float>(img.data()[i]);
}

void DiffractionGrid::validate() const {
  if (scan_p < 1 || scan_q < 1 || rows < 1 || cols < 1)
    fail(Errc::dimension_mismatch, "grid requires P, Q, K, L >= 1");
  if (data.size() != static_cast<std::size_t>(scan_p) * scan_q * rows * cols)
    fail(Errc::dimension_mismatch, "payload size does not match P*Q*K*L");
  for (float v : data) {
    if (!std::isfinite(v)) fail(Errc::non_finite_data, "grid contains NaN or Inf");
    if (v < 0.0f) fail(Errc::invalid_argument, "grid intensities must be >= 0");
  }
}

Mat2 Mat2::rotation_deg(double degrees) {
  const double rad = degrees * std::numbers::pi / 180.0;
  const double c = std::cos(rad);
  const double s = std::sin(rad);
  return {c, -s, s, c};
}

Mat2 Mat2::inverse() const {
  const double d = det();
  if (d == 0.0) fail(Errc::degenerate_geometry, "singular 2x2 matrix");
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

Mat2 Mat2::operator*(const Mat2& o) const {
  return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
          a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
}

double Mat2::max_abs() const {
  return std::max({std::abs(a11), std::abs(a12), std::abs(a21), std::abs(a22)});
}

}  // namespace temsig
