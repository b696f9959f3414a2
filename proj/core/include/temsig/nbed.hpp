#ifndef TEMSIG_NBED_HPP
#define TEMSIG_NBED_HPP

#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "temsig/types.hpp"

namespace temsig {

/// Gradient magnitude sqrt(Gx^2 + Gy^2) with the standard 3x3 Sobel kernels;
/// border pixels use truncated kernels.
Image sobel_filter(const Image& image);
void sobel_gradients(const Image& image, Image& gx, Image& gy);

namespace nbed {

enum class DiskKind { measured, flat, bullseye };
enum class Prefilter { none, sobel };

struct ReferenceDisk {
  Image image;
  DiskKind kind = DiskKind::flat;
  double radius = 0.0;
};

/// Flat: soft-edged disk (1 px Gaussian edge) centered at (cols/2, rows/2);
/// bullseye: flat modulated by ring_count equal-width annuli alternating
/// {1, 0.2}. ring_count == 1 is identical to flat.
ReferenceDisk make_reference_disk(double radius, DiskKind kind, int rows, int cols,
                                  int ring_count = 1);
/// Measured reference: passthrough with invariant checks only.
ReferenceDisk make_reference_disk(const Image& measured, double radius);

/// (f*g) = invF{ conj(F f) . F g / |conj(F f) . F g|^gamma }, real part.
/// gamma = 0 is the plain circular cross-correlation; for gamma > 0 bins with
/// |cross spectrum| < 1e-12 * max are zeroed before the division. Images of
/// different shapes are zero-padded to the common size.
Image hybrid_correlate(const Image& f, const Image& g, double gamma);

struct DiskPosition {
  double x = 0.0;
  double y = 0.0;
  double peak_value = 0.0;
  double curvature_x = 0.0;  // second derivative of the upsampled peak
  double curvature_y = 0.0;
  bool refined = false;
};

/// Local frequency-domain upsampling (factor kappa, (3 kappa)^2 window
/// evaluated as matrix products) followed by a separable 3-point parabola
/// fit. A peak on the surface border skips refinement and returns the integer
/// position flagged unrefined.
DiskPosition subpixel_refine(const Image& corr, int peak_x, int peak_y, int kappa = 16);

struct GVectorSet {
  DiskPosition center;
  std::vector<DiskPosition> positions;  // satellites, in detection order
  std::vector<Vec2> gvecs;              // satellite minus center
  std::vector<int> labels;              // index into the reference set after pairing
};

/// Correlates (optionally Sobel-filtering pattern and reference alike), picks
/// `expected` strongest local maxima with minimum separation 1.5 * radius,
/// refines each, and takes the brightest as the center disk.
GVectorSet register_disks(const Image& pattern, const ReferenceDisk& reference, int expected,
                          double gamma, Prefilter prefilter, int kappa = 16);

/// Matches measured g-vectors to the reference set (nearest neighbour,
/// bijective). Returns measured vectors ordered like gref and records labels.
std::vector<Vec2> pair_gvectors(GVectorSet& gset, std::span<const Vec2> gref);

/// Least squares A minimizing sum |g_meas - A g_ref|^2, returned as
/// F = A^{-T} (reciprocal vectors transform by the inverse transpose).
Mat2 deformation_gradient(std::span<const Vec2> g_meas, std::span<const Vec2> g_ref);

struct PolarParts {
  double rotation_deg = 0.0;
  Mat2 strain{0, 0, 0, 0};  // U - I, symmetric
};

/// Closed-form 2x2 polar decomposition F = R U; returns angle(R) in degrees
/// and U - I. Requires det F > 0.
PolarParts polar_decompose(const Mat2& f);

struct DeformationField {
  int scan_p = 0;
  int scan_q = 0;
  std::vector<Mat2> f;
  std::vector<Mat2> strain;
  std::vector<double> rotation_deg;
  std::vector<std::uint8_t> ok;
  std::vector<std::pair<int, std::string>> failures;  // (flat index, reason)

  std::size_t index(int p, int q) const { return static_cast<std::size_t>(p) * scan_q + q; }
};

struct StrainMapConfig {
  std::optional<std::pair<int, int>> reference_point;  // scan point supplying gref
  std::vector<Vec2> reference_gvecs;                   // or gref supplied directly
  std::optional<Image> reference_disk_image;           // measured reference disk
  DiskKind disk = DiskKind::flat;
  double disk_radius = 6.0;
  int ring_count = 1;
  int expected_disks = 0;  // total peaks per pattern, center included
  double gamma = 0.5;
  Prefilter prefilter = Prefilter::sobel;
  int kappa = 16;
};

/// Per-scan-point register -> deformation gradient -> polar decomposition.
/// Failed points are flagged and reported, never interpolated.
DeformationField strain_map(const DiffractionGrid& grid, const StrainMapConfig& config);

}  // namespace nbed
}  // namespace temsig

#endif
