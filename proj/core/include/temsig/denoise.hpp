#ifndef TEMSIG_DENOISE_HPP
#define TEMSIG_DENOISE_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "temsig/types.hpp"

namespace temsig {

struct BrightnessSeries {
  std::vector<double> values;  // mean intensity per frame
  std::optional<double> frame_interval;
};

/// Per-frame arithmetic mean, fixed-order summation.
BrightnessSeries frame_brightness(const VideoStack& stack);

enum class Metric { chebyshev, euclidean };

struct FilterConfig {
  int radius = 1;  // >= 1
  Metric metric = Metric::chebyshev;
  double sigma_spatial = 1.0;  // bilateral only, > 0
  double sigma_value = 1.0;    // bilateral only, > 0
};

/// Unweighted mean over the in-bounds neighborhood D <= r, center included.
/// The neighborhood is truncated at frame edges (no padding).
Image mean_filter(const Image& frame, const FilterConfig& cfg);

/// Weighted mean with w = exp(-dist^2 / 2 s_s^2) * exp(-(Y_kl - Y_nm)^2 / 2 s_v^2)
/// over the same neighborhood.
Image bilateral_filter(const Image& frame, const FilterConfig& cfg);

/// Natural cubic smoothing spline minimizing sum (y_i - g(t_i))^2 + lambda
/// int g''^2. Piecewise cubic with natural boundary; linear extrapolation
/// outside the knot range.
struct SplineFit {
  struct Cubic {
    double c0 = 0, c1 = 0, c2 = 0, c3 = 0;  // value = c0 + c1 u + c2 u^2 + c3 u^3
  };
  std::vector<double> knots;     // sorted time points
  std::vector<Cubic> segments;   // knots.size() - 1 entries
  double lambda = 0.0;
  double cv_score = 0.0;         // mean-squared cross-validation error

  double evaluate(double t) const;
  std::vector<double> evaluate(std::span<const double> t) const;
};

/// Single fit at a fixed lambda over arbitrary strictly increasing knots.
SplineFit fit_smoothing_spline(std::span<const double> t, std::span<const double> y,
                               double lambda);

/// Fits the series (time axis = frame index) for every lambda in the grid,
/// scores each by k-fold cross-validation (interleaved folds by default,
/// seeded shuffle when fold_seed is set), and returns the full-data refit at
/// the CV-optimal lambda.
SplineFit fit_spline(const BrightnessSeries& series, std::span<const double> lambda_grid,
                     int folds = 5, std::optional<std::uint64_t> fold_seed = std::nullopt);

enum class CorrectionMode { to_mean, remove_trend };

/// X* = X - trend_t + mean(trend). For to_mean the trend is the measured
/// per-frame brightness (restores the grand mean); for remove_trend it is a
/// fitted slow trend (preserves real signal riding on it).
VideoStack correct_brightness(const VideoStack& stack, std::span<const double> trend,
                              CorrectionMode mode);

}  // namespace temsig

#endif
