#include "temsig/nbed.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "temsig/errors.hpp"
#include "temsig/fft.hpp"
#include "temsig/parallel.hpp"
#include "temsig/synth.hpp"

namespace temsig {

void sobel_gradients(const Image& image, Image& gx, Image& gy) {
  if (image.rows() < 3 || image.cols() < 3)
    fail(Errc::invalid_argument, "sobel needs at least a 3x3 image");
  static constexpr int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  static constexpr int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  gx = Image(image.rows(), image.cols());
  gy = Image(image.rows(), image.cols());
  for (int r = 0; r < image.rows(); ++r) {
    for (int c = 0; c < image.cols(); ++c) {
      // truncated kernel at the border, applied to differences from the
      // center so the missing taps cannot bias a flat region
      const double center = image(r, c);
      double ax = 0.0, ay = 0.0;
      for (int dr = -1; dr <= 1; ++dr) {
        for (int dc = -1; dc <= 1; ++dc) {
          const int rr = r + dr;
          const int cc = c + dc;
          if (!image.in_bounds(rr, cc)) continue;
          const double v = image(rr, cc) - center;
          ax += kx[dr + 1][dc + 1] * v;
          ay += ky[dr + 1][dc + 1] * v;
        }
      }
      gx(r, c) = ax;
      gy(r, c) = ay;
    }
  }
}

Image sobel_filter(const Image& image) {
  Image gx, gy;
  sobel_gradients(image, gx, gy);
  Image out(image.rows(), image.cols());
  for (std::size_t i = 0; i < out.size(); ++i)
    out.data()[i] = std::hypot(gx.data()[i], gy.data()[i]);
  return out;
}

namespace nbed {

namespace {

using fft::cvec;

Image zero_pad(const Image& in, int rows, int cols) {
  if (in.rows() == rows && in.cols() == cols) return in;
  Image out(rows, cols, 0.0);
  for (int r = 0; r < in.rows(); ++r)
    for (int c = 0; c < in.cols(); ++c) out(r, c) = in(r, c);
  return out;
}

int signed_freq(int index, int n) { return index < (n + 1) / 2 ? index : index - n; }

}  // namespace

ReferenceDisk make_reference_disk(double radius, DiskKind kind, int rows, int cols,
                                  int ring_count) {
  if (kind == DiskKind::measured)
    fail(Errc::invalid_argument, "measured reference requires an image; use the overload");
  if (!(radius > 0.0) || radius >= std::min(rows, cols) / 2.0)
    fail(Errc::radius_too_large, "disk radius must satisfy 0 < r < min(K,L)/2");
  if (ring_count < 1) fail(Errc::invalid_argument, "ring_count must be >= 1");

  ReferenceDisk disk;
  disk.kind = kind;
  disk.radius = radius;
  disk.image = Image(rows, cols, 0.0);
  synth::add_disk(disk.image, cols / 2.0, rows / 2.0, radius, 1.0,
                  kind == DiskKind::bullseye, ring_count);
  return disk;
}

ReferenceDisk make_reference_disk(const Image& measured, double radius) {
  if (measured.size() == 0) fail(Errc::empty_input, "measured reference disk is empty");
  if (!measured.all_finite()) fail(Errc::non_finite_data, "measured reference disk not finite");
  if (measured.min() < 0.0) fail(Errc::invalid_argument, "reference disk must be non-negative");
  if (!(radius > 0.0)) fail(Errc::invalid_argument, "radius must be > 0");
  return {measured, DiskKind::measured, radius};
}

Image hybrid_correlate(const Image& f, const Image& g, double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0)) fail(Errc::invalid_argument, "gamma must be in [0,1]");
  const int rows = std::max(f.rows(), g.rows());
  const int cols = std::max(f.cols(), g.cols());
  if (rows == 0 || cols == 0) fail(Errc::dimension_mismatch, "empty correlation input");

  const cvec ff = fft::forward2d(zero_pad(f, rows, cols));
  const cvec fg = fft::forward2d(zero_pad(g, rows, cols));

  cvec cross(ff.size());
  for (std::size_t i = 0; i < ff.size(); ++i) cross[i] = std::conj(ff[i]) * fg[i];

  if (gamma > 0.0) {
    double max_mag = 0.0;
    for (const auto& v : cross) max_mag = std::max(max_mag, std::abs(v));
    const double eps = 1e-12 * max_mag;
    for (auto& v : cross) {
      const double mag = std::abs(v);
      if (mag < eps)
        v = 0.0;
      else
        v /= std::pow(mag, gamma);
    }
  }

  const cvec corr = fft::inverse2d(cross, rows, cols);
  Image out(rows, cols);
  for (std::size_t i = 0; i < corr.size(); ++i) out.data()[i] = corr[i].real();
  return out;
}

DiskPosition subpixel_refine(const Image& corr, int peak_x, int peak_y, int kappa) {
  if (kappa < 2) fail(Errc::invalid_argument, "kappa must be >= 2");
  const int rows = corr.rows();
  const int cols = corr.cols();
  if (!corr.in_bounds(peak_y, peak_x)) fail(Errc::invalid_argument, "peak outside surface");

  DiskPosition pos;
  pos.x = peak_x;
  pos.y = peak_y;
  pos.peak_value = corr(peak_y, peak_x);
  if (peak_x == 0 || peak_x == cols - 1 || peak_y == 0 || peak_y == rows - 1) {
    warn("subpixel refinement skipped: peak on the surface border");
    return pos;  // refined stays false
  }

  const cvec spectrum = fft::forward2d(corr);

  // upsampled evaluation over a (3 kappa)^2 window centred on the peak,
  // computed as two small matrix products against the spectrum
  const int n = 3 * kappa + 1;
  const double half = (n - 1) / 2.0;
  const auto i2pi = std::complex<double>(0.0, 2.0 * std::numbers::pi);

  std::vector<std::complex<double>> row_phase(static_cast<std::size_t>(n) * rows);
  for (int a = 0; a < n; ++a) {
    const double y = peak_y + (a - half) / kappa;
    for (int u = 0; u < rows; ++u) {
      const int su = signed_freq(u, rows);
      row_phase[static_cast<std::size_t>(a) * rows + u] = std::exp(i2pi * (su * y / rows));
    }
  }
  std::vector<std::complex<double>> col_phase(static_cast<std::size_t>(cols) * n);
  for (int v = 0; v < cols; ++v) {
    const int sv = signed_freq(v, cols);
    for (int b = 0; b < n; ++b) {
      const double x = peak_x + (b - half) / kappa;
      col_phase[static_cast<std::size_t>(v) * n + b] = std::exp(i2pi * (sv * x / cols));
    }
  }

  // tmp = spectrum * col_phase  (rows x n)
  std::vector<std::complex<double>> tmp(static_cast<std::size_t>(rows) * n, 0.0);
  for (int u = 0; u < rows; ++u) {
    for (int v = 0; v < cols; ++v) {
      const std::complex<double> s = spectrum[static_cast<std::size_t>(u) * cols + v];
      if (s == std::complex<double>(0.0)) continue;
      const std::complex<double>* cp = &col_phase[static_cast<std::size_t>(v) * n];
      std::complex<double>* tp = &tmp[static_cast<std::size_t>(u) * n];
      for (int b = 0; b < n; ++b) tp[b] += s * cp[b];
    }
  }
  // up = row_phase * tmp  (n x n), real part
  std::vector<double> up(static_cast<std::size_t>(n) * n, 0.0);
  const double scale = 1.0 / (static_cast<double>(rows) * cols);
  for (int a = 0; a < n; ++a) {
    for (int u = 0; u < rows; ++u) {
      const std::complex<double> w = row_phase[static_cast<std::size_t>(a) * rows + u];
      const std::complex<double>* tp = &tmp[static_cast<std::size_t>(u) * n];
      double* upr = &up[static_cast<std::size_t>(a) * n];
      for (int b = 0; b < n; ++b)
        upr[b] += (w * tp[b]).real();
    }
  }
  for (auto& v : up) v *= scale;

  int best_a = 0, best_b = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const double v = up[static_cast<std::size_t>(a) * n + b];
      if (v > best) {
        best = v;
        best_a = a;
        best_b = b;
      }
    }
  }

  // separable 3-point parabola at the upsampled peak (step 1/kappa)
  const double h = 1.0 / kappa;
  double dx = 0.0, dy = 0.0;
  pos.peak_value = best;
  if (best_b > 0 && best_b < n - 1) {
    const double cm = up[static_cast<std::size_t>(best_a) * n + best_b - 1];
    const double cp = up[static_cast<std::size_t>(best_a) * n + best_b + 1];
    const double denom = cm - 2.0 * best + cp;
    if (denom < 0.0) dx = 0.5 * (cm - cp) / denom;
    pos.curvature_x = denom / (h * h);
  }
  if (best_a > 0 && best_a < n - 1) {
    const double cm = up[static_cast<std::size_t>(best_a - 1) * n + best_b];
    const double cp = up[static_cast<std::size_t>(best_a + 1) * n + best_b];
    const double denom = cm - 2.0 * best + cp;
    if (denom < 0.0) dy = 0.5 * (cm - cp) / denom;
    pos.curvature_y = denom / (h * h);
  }
  dx = std::clamp(dx, -1.0, 1.0);
  dy = std::clamp(dy, -1.0, 1.0);

  pos.x = peak_x + (best_b - half + dx) / kappa;
  pos.y = peak_y + (best_a - half + dy) / kappa;
  pos.refined = true;
  return pos;
}

namespace {

Image fftshift(const Image& in) {
  Image out(in.rows(), in.cols());
  const int sr = in.rows() / 2;
  const int sc = in.cols() / 2;
  for (int r = 0; r < in.rows(); ++r)
    for (int c = 0; c < in.cols(); ++c)
      out((r + sr) % in.rows(), (c + sc) % in.cols()) = in(r, c);
  return out;
}

}  // namespace

GVectorSet register_disks(const Image& pattern, const ReferenceDisk& reference, int expected,
                          double gamma, Prefilter prefilter, int kappa) {
  if (expected < 1) fail(Errc::invalid_argument, "expected disk count must be >= 1");
  if (pattern.size() == 0) fail(Errc::empty_input, "empty pattern");

  Image f = reference.image;
  Image g = pattern;
  if (prefilter == Prefilter::sobel) {
    f = sobel_filter(f);
    g = sobel_filter(g);
  }

  // peak at shift d means the pattern disk sits at refcenter + d; fftshift
  // moves zero shift to the surface center so interior peak finding works
  const Image corr = fftshift(hybrid_correlate(f, g, gamma));
  const int rows = corr.rows();
  const int cols = corr.cols();
  const int origin_y = rows / 2;
  const int origin_x = cols / 2;

  struct Peak {
    int x, y;
    double value;
  };
  std::vector<Peak> maxima;
  double top = -std::numeric_limits<double>::infinity();
  for (int r = 1; r + 1 < rows; ++r) {
    for (int c = 1; c + 1 < cols; ++c) {
      const double v = corr(r, c);
      bool is_max = true;
      for (int dr = -1; dr <= 1 && is_max; ++dr)
        for (int dc = -1; dc <= 1; ++dc) {
          if (dr == 0 && dc == 0) continue;
          if (corr(r + dr, c + dc) >= v) {
            is_max = false;
            break;
          }
        }
      if (is_max) {
        maxima.push_back({c, r, v});
        top = std::max(top, v);
      }
    }
  }
  // correlation sidelobes sit around 1% of a disk peak; cull them so a
  // missing disk surfaces as TooFewPeaks instead of a bogus position
  std::erase_if(maxima, [&](const Peak& p) { return p.value < 0.05 * top; });
  std::sort(maxima.begin(), maxima.end(), [](const Peak& a, const Peak& b) {
    if (a.value != b.value) return a.value > b.value;
    if (a.y != b.y) return a.y < b.y;
    return a.x < b.x;
  });

  const double min_sep = 1.5 * reference.radius;
  std::vector<Peak> accepted;
  for (const auto& peak : maxima) {
    bool clear = true;
    for (const auto& a : accepted) {
      if (std::hypot(peak.x - a.x, peak.y - a.y) < min_sep) {
        clear = false;
        break;
      }
    }
    if (clear) accepted.push_back(peak);
    if (static_cast<int>(accepted.size()) == expected) break;
  }
  if (static_cast<int>(accepted.size()) < expected)
    fail(Errc::too_few_peaks, "found " + std::to_string(accepted.size()) + " of " +
                                  std::to_string(expected) + " expected disks");

  std::vector<DiskPosition> refined;
  refined.reserve(accepted.size());
  for (const auto& peak : accepted) {
    DiskPosition p = subpixel_refine(corr, peak.x, peak.y, kappa);
    // map the shift back to pattern coordinates
    p.x = reference.image.cols() / 2.0 + (p.x - origin_x);
    p.y = reference.image.rows() / 2.0 + (p.y - origin_y);
    refined.push_back(p);
  }

  std::size_t center_idx = 0;
  for (std::size_t i = 1; i < refined.size(); ++i)
    if (refined[i].peak_value > refined[center_idx].peak_value) center_idx = i;

  GVectorSet gset;
  gset.center = refined[center_idx];
  for (std::size_t i = 0; i < refined.size(); ++i) {
    if (i == center_idx) continue;
    gset.positions.push_back(refined[i]);
    gset.gvecs.push_back(
        {refined[i].x - gset.center.x, refined[i].y - gset.center.y});
  }
  return gset;
}

std::vector<Vec2> pair_gvectors(GVectorSet& gset, std::span<const Vec2> gref) {
  if (gset.gvecs.size() != gref.size())
    fail(Errc::degenerate_geometry, "measured and reference g-vector counts differ");
  const std::size_t n = gref.size();
  std::vector<int> assignment(n, -1);
  std::vector<bool> used(n, false);
  for (std::size_t j = 0; j < n; ++j) {
    double best = std::numeric_limits<double>::infinity();
    int arg = -1;
    for (std::size_t i = 0; i < n; ++i) {
      const double dist = (gset.gvecs[i] - gref[j]).norm();
      if (dist < best) {
        best = dist;
        arg = static_cast<int>(i);
      }
    }
    if (arg < 0 || used[arg])
      fail(Errc::degenerate_geometry, "g-vector pairing is not a bijection");
    used[arg] = true;
    assignment[j] = arg;
  }
  gset.labels.assign(n, -1);
  std::vector<Vec2> ordered(n);
  for (std::size_t j = 0; j < n; ++j) {
    ordered[j] = gset.gvecs[assignment[j]];
    gset.labels[assignment[j]] = static_cast<int>(j);
  }
  return ordered;
}

Mat2 deformation_gradient(std::span<const Vec2> g_meas, std::span<const Vec2> g_ref) {
  if (g_meas.size() != g_ref.size())
    fail(Errc::degenerate_geometry, "paired vector lists must match in length");
  if (g_meas.size() < 2) fail(Errc::degenerate_geometry, "need at least 2 paired g-vectors");

  // normal equations: A = (sum g_m g_r^T)(sum g_r g_r^T)^{-1}
  Mat2 mr{0, 0, 0, 0}, rr{0, 0, 0, 0};
  for (std::size_t i = 0; i < g_meas.size(); ++i) {
    const Vec2 m = g_meas[i];
    const Vec2 r = g_ref[i];
    mr.a11 += m.x * r.x;
    mr.a12 += m.x * r.y;
    mr.a21 += m.y * r.x;
    mr.a22 += m.y * r.y;
    rr.a11 += r.x * r.x;
    rr.a12 += r.x * r.y;
    rr.a21 += r.y * r.x;
    rr.a22 += r.y * r.y;
  }
  const double det = rr.det();
  const double scale = std::max({std::abs(rr.a11), std::abs(rr.a22), 1e-300});
  if (std::abs(det) < 1e-12 * scale * scale)
    fail(Errc::degenerate_geometry, "reference g-vectors are rank deficient");
  const Mat2 a = mr * rr.inverse();
  if (a.det() == 0.0) fail(Errc::degenerate_geometry, "fitted mapping is singular");
  return a.inverse().transpose();  // F = A^{-T}
}

PolarParts polar_decompose(const Mat2& f) {
  if (!(f.det() > 0.0)) fail(Errc::non_positive_determinant, "polar decomposition needs det F > 0");
  const double c = f.a11 + f.a22;
  const double s = f.a21 - f.a12;
  const double h = std::hypot(c, s);
  const Mat2 rot{c / h, -s / h, s / h, c / h};
  Mat2 u = rot.transpose() * f;
  // enforce exact symmetry of U (closed form is symmetric up to rounding)
  const double off = 0.5 * (u.a12 + u.a21);
  u.a12 = off;
  u.a21 = off;

  PolarParts parts;
  parts.rotation_deg = std::atan2(s, c) * 180.0 / std::numbers::pi;
  parts.strain = {u.a11 - 1.0, u.a12, u.a21, u.a22 - 1.0};
  return parts;
}

DeformationField strain_map(const DiffractionGrid& grid, const StrainMapConfig& config) {
  grid.validate();
  if (config.expected_disks < 2 && config.reference_gvecs.empty() && !config.reference_point)
    fail(Errc::invalid_argument, "strain map needs reference g-vectors or a reference point");

  ReferenceDisk reference =
      config.reference_disk_image
          ? make_reference_disk(*config.reference_disk_image, config.disk_radius)
          : make_reference_disk(config.disk_radius, config.disk, grid.rows, grid.cols,
                                config.ring_count);

  std::vector<Vec2> gref = config.reference_gvecs;
  if (gref.empty()) {
    if (!config.reference_point)
      fail(Errc::invalid_argument, "no reference g-vectors and no reference point");
    const auto [rp, rq] = *config.reference_point;
    if (rp < 0 || rp >= grid.scan_p || rq < 0 || rq >= grid.scan_q)
      fail(Errc::invalid_argument, "reference scan point outside the grid");
    GVectorSet ref_set = register_disks(grid.pattern(rp, rq), reference, config.expected_disks,
                                        config.gamma, config.prefilter, config.kappa);
    gref = ref_set.gvecs;
  }
  if (gref.size() < 2) fail(Errc::degenerate_geometry, "need at least 2 reference g-vectors");

  const int expected = static_cast<int>(gref.size()) + 1;  // satellites + center disk

  DeformationField field;
  field.scan_p = grid.scan_p;
  field.scan_q = grid.scan_q;
  const std::size_t total = static_cast<std::size_t>(grid.scan_p) * grid.scan_q;
  field.f.assign(total, Mat2::identity());
  field.strain.assign(total, Mat2{0, 0, 0, 0});
  field.rotation_deg.assign(total, 0.0);
  field.ok.assign(total, 0);
  std::vector<std::string> errors(total);

  parallel_for(total, [&](std::size_t idx) {
    const int p = static_cast<int>(idx) / grid.scan_q;
    const int q = static_cast<int>(idx) % grid.scan_q;
    try {
      GVectorSet gset = register_disks(grid.pattern(p, q), reference, expected, config.gamma,
                                       config.prefilter, config.kappa);
      const std::vector<Vec2> ordered = pair_gvectors(gset, gref);
      const Mat2 f = deformation_gradient(ordered, gref);
      const PolarParts parts = polar_decompose(f);
      field.f[idx] = f;
      field.strain[idx] = parts.strain;
      field.rotation_deg[idx] = parts.rotation_deg;
      field.ok[idx] = 1;
    } catch (const Error& e) {
      errors[idx] = e.what();
    }
  });

  for (std::size_t i = 0; i < total; ++i)
    if (!field.ok[i]) field.failures.emplace_back(static_cast<int>(i), errors[i]);
  return field;
}

}  // namespace nbed
}  // namespace temsig
