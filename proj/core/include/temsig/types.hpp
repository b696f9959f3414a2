#ifndef TEMSIG_TYPES_HPP
#define TEMSIG_TYPES_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace temsig {

/// 2D scalar field, row-major, double precision. Used for single frames,
/// diffraction patterns, correlation surfaces and derived maps.
class Image {
 public:
  Image() = default;
  Image(int rows, int cols, double fill = 0.0);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  double operator()(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  bool in_bounds(int r, int c) const { return r >= 0 && r < rows_ && c >= 0 && c < cols_; }
  bool same_shape(const Image& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_;
  }

  double min() const;
  double max() const;
  double sum() const;  // fixed-order summation
  bool all_finite() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// 3D scalar field (frames x rows x cols), double precision. Intermediate
/// results such as forward differences.
class Volume {
 public:
  Volume() = default;
  Volume(int frames, int rows, int cols, double fill = 0.0);

  int frames() const { return frames_; }
  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(int t, int r, int c) {
    return data_[(static_cast<std::size_t>(t) * rows_ + r) * cols_ + c];
  }
  double operator()(int t, int r, int c) const {
    return data_[(static_cast<std::size_t>(t) * rows_ + r) * cols_ + c];
  }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

 private:
  int frames_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<double> data_;
};

/// Video substrate: T frames of MxN 32-bit intensities plus acquisition
/// metadata. Payload layout is (t, row, column), matching the TVS container.
struct VideoStack {
  int frames = 0;
  int rows = 0;
  int cols = 0;
  std::optional<double> frame_interval;  // seconds per frame, > 0 when set
  std::optional<double> pixel_size;      // nm per pixel
  std::vector<float> data;

  VideoStack() = default;
  VideoStack(int frames, int rows, int cols, float fill = 0.0f);

  std::size_t index(int t, int r, int c) const {
    return (static_cast<std::size_t>(t) * rows + r) * cols + c;
  }
  float& at(int t, int r, int c) { return data[index(t, r, c)]; }
  float at(int t, int r, int c) const { return data[index(t, r, c)]; }

  Image frame(int t) const;
  void set_frame(int t, const Image& img);

  /// Throws on invariant violation (empty dims, payload size mismatch,
  /// non-finite values, non-positive frame interval).
  void validate() const;
};

/// Boolean exclusion mask; true marks pixels removed from analysis
/// (beam stop shadow and similar occlusions).
struct MaskImage {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;

  MaskImage() = default;
  MaskImage(int rows, int cols, bool fill = false);

  bool at(int r, int c) const { return bits[static_cast<std::size_t>(r) * cols + c] != 0; }
  void set(int r, int c, bool v) { bits[static_cast<std::size_t>(r) * cols + c] = v ? 1 : 0; }
  std::size_t count() const;
};

/// P x Q scan grid of K x L diffraction patterns. Serialized as a TVS stack
/// with T = P*Q and header keys scan_p / scan_q, row-major scan order.
struct DiffractionGrid {
  int scan_p = 0;
  int scan_q = 0;
  int rows = 0;  // K
  int cols = 0;  // L
  std::optional<double> scan_step;  // nm
  std::vector<float> data;

  DiffractionGrid() = default;
  DiffractionGrid(int scan_p, int scan_q, int rows, int cols, float fill = 0.0f);

  std::size_t pattern_index(int p, int q) const {
    return static_cast<std::size_t>(p) * scan_q + q;
  }
  Image pattern(int p, int q) const;
  void set_pattern(int p, int q, const Image& img);

  void validate() const;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2 operator+(Vec2 o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(Vec2 o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double k) const { return {x * k, y * k}; }
  double norm() const { return std::hypot(x, y); }
};

/// 2x2 real matrix, row-major: [[a11 a12], [a21 a22]].
struct Mat2 {
  double a11 = 1.0, a12 = 0.0;
  double a21 = 0.0, a22 = 1.0;

  static Mat2 identity() { return {}; }
  static Mat2 rotation_deg(double degrees);

  double det() const { return a11 * a22 - a12 * a21; }
  Mat2 transpose() const { return {a11, a21, a12, a22}; }
  Mat2 inverse() const;  // throws Errc::degenerate_geometry when singular
  Mat2 operator*(const Mat2& o) const;
  Vec2 operator*(Vec2 v) const { return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y}; }
  Mat2 operator-(const Mat2& o) const {
    return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
  }
  double max_abs() const;
};

}  // namespace temsig

#endif
