#include "temsig/denoise.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "temsig/errors.hpp"
#include "temsig/parallel.hpp"
#include "temsig/rng.hpp"

namespace temsig {

namespace {

struct Offset {
  int dr, dc;
  double dist2;  // squared euclidean distance
};

std::vector<Offset> neighborhood_offsets(const FilterConfig& cfg) {
  std::vector<Offset> offsets;
  const int r = cfg.radius;
  for (int dr = -r; dr <= r; ++dr) {
    for (int dc = -r; dc <= r; ++dc) {
      const bool inside = cfg.metric == Metric::chebyshev
                              ? std::max(std::abs(dr), std::abs(dc)) <= r
                              : dr * dr + dc * dc <= r * r;
      if (inside) offsets.push_back({dr, dc, static_cast<double>(dr * dr + dc * dc)});
    }
  }
  return offsets;
}

void check_filter_config(const FilterConfig& cfg, bool bilateral) {
  if (cfg.radius < 1) fail(Errc::invalid_argument, "filter radius must be >= 1");
  if (bilateral && (cfg.sigma_spatial <= 0.0 || cfg.sigma_value <= 0.0))
    fail(Errc::invalid_argument, "bilateral sigmas must be > 0");
}

// Symmetric pentadiagonal LDL^T solve, in-place on the right-hand side.
// d: diagonal, e: first off-diagonal (n-1), f: second off-diagonal (n-2).
void solve_pentadiagonal(std::vector<double> d, std::vector<double> e, std::vector<double> f,
                         std::vector<double>& rhs) {
  const std::size_t n = d.size();
  std::vector<double> l1(n, 0.0), l2(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double di = d[i];
    if (i >= 1) di -= l1[i - 1] * l1[i - 1] * d[i - 1];
    if (i >= 2) di -= l2[i - 2] * l2[i - 2] * d[i - 2];
    if (!(di > 0.0)) fail(Errc::singular_system, "smoothing spline system is not positive definite");
    d[i] = di;
    if (i + 1 < n) {
      double v = e[i];
      if (i >= 1) v -= l1[i - 1] * d[i - 1] * l2[i - 1];
      l1[i] = v / di;
    }
    if (i + 2 < n) l2[i] = f[i] / di;
  }
  // forward substitution L z = rhs
  for (std::size_t i = 0; i < n; ++i) {
    if (i >= 1) rhs[i] -= l1[i - 1] * rhs[i - 1];
    if (i >= 2) rhs[i] -= l2[i - 2] * rhs[i - 2];
  }
  // D
  for (std::size_t i = 0; i < n; ++i) rhs[i] /= d[i];
  // back substitution L^T x = z
  for (std::size_t ii = n; ii-- > 0;) {
    if (ii + 1 < n) rhs[ii] -= l1[ii] * rhs[ii + 1];
    if (ii + 2 < n) rhs[ii] -= l2[ii] * rhs[ii + 2];
  }
}

SplineFit build_fit(std::span<const double> t, const std::vector<double>& g,
                    const std::vector<double>& m, double lambda) {
  SplineFit fit;
  fit.lambda = lambda;
  fit.knots.assign(t.begin(), t.end());
  const std::size_t n = t.size();
  fit.segments.resize(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double h = t[i + 1] - t[i];
    SplineFit::Cubic c;
    c.c0 = g[i];
    c.c1 = (g[i + 1] - g[i]) / h - h * (2.0 * m[i] + m[i + 1]) / 6.0;
    c.c2 = m[i] / 2.0;
    c.c3 = (m[i + 1] - m[i]) / (6.0 * h);
    fit.segments[i] = c;
  }
  return fit;
}

std::vector<int> fold_assignment(std::size_t n, int folds, std::optional<std::uint64_t> seed) {
  std::vector<int> assign(n);
  for (std::size_t i = 0; i < n; ++i) assign[i] = static_cast<int>(i % folds);
  if (seed) {
    GaussianStream stream(*seed, 0);
    for (std::size_t i = n; i-- > 1;) {
      const std::uint64_t j = stream.uniform_index(i, i + 1);
      std::swap(assign[i], assign[j]);
    }
  }
  return assign;
}

}  // namespace

BrightnessSeries frame_brightness(const VideoStack& stack) {
  stack.validate();
  BrightnessSeries series;
  series.frame_interval = stack.frame_interval;
  series.values.resize(stack.frames);
  const std::size_t per_frame = static_cast<std::size_t>(stack.rows) * stack.cols;
  for (int t = 0; t < stack.frames; ++t) {
    double acc = 0.0;
    const std::size_t base = static_cast<std::size_t>(t) * per_frame;
    for (std::size_t i = 0; i < per_frame; ++i) acc += stack.data[base + i];
    series.values[t] = acc / static_cast<double>(per_frame);
  }
  return series;
}

Image mean_filter(const Image& frame, const FilterConfig& cfg) {
  check_filter_config(cfg, false);
  const auto offsets = neighborhood_offsets(cfg);
  Image out(frame.rows(), frame.cols());
  parallel_for(static_cast<std::size_t>(frame.rows()), [&](std::size_t ri) {
    const int r = static_cast<int>(ri);
    for (int c = 0; c < frame.cols(); ++c) {
      double acc = 0.0;
      int count = 0;
      for (const auto& o : offsets) {
        const int rr = r + o.dr;
        const int cc = c + o.dc;
        if (!frame.in_bounds(rr, cc)) continue;
        acc += frame(rr, cc);
        ++count;
      }
      out(r, c) = acc / count;
    }
  });
  return out;
}

Image bilateral_filter(const Image& frame, const FilterConfig& cfg) {
  check_filter_config(cfg, true);
  const auto offsets = neighborhood_offsets(cfg);
  std::vector<double> spatial_w(offsets.size());
  for (std::size_t i = 0; i < offsets.size(); ++i)
    spatial_w[i] = std::exp(-offsets[i].dist2 / (2.0 * cfg.sigma_spatial * cfg.sigma_spatial));
  const double inv_2sv2 = 1.0 / (2.0 * cfg.sigma_value * cfg.sigma_value);

  Image out(frame.rows(), frame.cols());
  parallel_for(static_cast<std::size_t>(frame.rows()), [&](std::size_t ri) {
    const int r = static_cast<int>(ri);
    for (int c = 0; c < frame.cols(); ++c) {
      const double center = frame(r, c);
      double acc = 0.0;
      double wsum = 0.0;
      for (std::size_t i = 0; i < offsets.size(); ++i) {
        const int rr = r + offsets[i].dr;
        const int cc = c + offsets[i].dc;
        if (!frame.in_bounds(rr, cc)) continue;
        const double v = frame(rr, cc);
        const double dv = v - center;
        const double w = spatial_w[i] * std::exp(-dv * dv * inv_2sv2);
        acc += w * v;
        wsum += w;
      }
      out(r, c) = acc / wsum;
    }
  });
  return out;
}

double SplineFit::evaluate(double t) const {
  const std::size_t n = knots.size();
  if (n == 0) fail(Errc::empty_input, "empty spline");
  if (n == 1) return segments.empty() ? 0.0 : segments.front().c0;
  std::size_t i;
  if (t <= knots.front()) {
    i = 0;
  } else if (t >= knots.back()) {
    i = n - 2;
  } else {
    i = static_cast<std::size_t>(
            std::upper_bound(knots.begin(), knots.end(), t) - knots.begin()) - 1;
  }
  // natural spline: second derivative vanishes at the ends, so evaluating the
  // end cubics outside the range is linear up to the cubic tail; extrapolate
  // explicitly with the boundary slope instead.
  const auto& c = segments[i];
  if (t < knots.front()) {
    const double slope = c.c1;  // m[0] == 0 at the natural boundary
    return c.c0 + slope * (t - knots.front());
  }
  if (t > knots.back()) {
    const double h = knots[n - 1] - knots[n - 2];
    const double slope = c.c1 + 2.0 * c.c2 * h + 3.0 * c.c3 * h * h;
    const double end_value = c.c0 + c.c1 * h + c.c2 * h * h + c.c3 * h * h * h;
    return end_value + slope * (t - knots.back());
  }
  const double u = t - knots[i];
  return c.c0 + u * (c.c1 + u * (c.c2 + u * c.c3));
}

std::vector<double> SplineFit::evaluate(std::span<const double> t) const {
  std::vector<double> out(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) out[i] = evaluate(t[i]);
  return out;
}

SplineFit fit_smoothing_spline(std::span<const double> t, std::span<const double> y,
                               double lambda) {
  const std::size_t n = t.size();
  if (n != y.size()) fail(Errc::length_mismatch, "t and y lengths differ");
  if (n < 3) fail(Errc::too_few_points, "smoothing spline needs at least 3 points");
  if (lambda < 0.0) fail(Errc::invalid_argument, "lambda must be >= 0");
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (!(t[i + 1] > t[i])) fail(Errc::invalid_argument, "knots must be strictly increasing");

  std::vector<double> h(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) h[i] = t[i + 1] - t[i];

  // Reinsch: solve (R + lambda Q^T Q) gamma = Q^T y for the interior second
  // derivatives, then g = y - lambda Q gamma.
  const std::size_t m = n - 2;
  std::vector<double> diag(m), off1(m > 1 ? m - 1 : 0), off2(m > 2 ? m - 2 : 0);
  std::vector<double> rhs(m);

  auto q_col = [&](std::size_t j, double& qa, double& qb, double& qc) {
    qa = 1.0 / h[j];
    qb = -1.0 / h[j] - 1.0 / h[j + 1];
    qc = 1.0 / h[j + 1];
  };

  for (std::size_t j = 0; j < m; ++j) {
    double qa, qb, qc;
    q_col(j, qa, qb, qc);
    diag[j] = (h[j] + h[j + 1]) / 3.0 + lambda * (qa * qa + qb * qb + qc * qc);
    rhs[j] = qa * y[j] + qb * y[j + 1] + qc * y[j + 2];
    if (j + 1 < m) {
      double pa, pb, pc;
      q_col(j + 1, pa, pb, pc);
      // columns j and j+1 overlap in rows j+1, j+2
      off1[j] = h[j + 1] / 6.0 + lambda * (qb * pa + qc * pb);
    }
    if (j + 2 < m) {
      double pa, pb, pc;
      q_col(j + 2, pa, pb, pc);
      off2[j] = lambda * (qc * pa);
    }
  }

  solve_pentadiagonal(diag, off1, off2, rhs);  // rhs now holds gamma

  std::vector<double> g(y.begin(), y.end());
  for (std::size_t j = 0; j < m; ++j) {
    double qa, qb, qc;
    q_col(j, qa, qb, qc);
    g[j] -= lambda * qa * rhs[j];
    g[j + 1] -= lambda * qb * rhs[j];
    g[j + 2] -= lambda * qc * rhs[j];
  }

  std::vector<double> second(n, 0.0);
  for (std::size_t j = 0; j < m; ++j) second[j + 1] = rhs[j];

  return build_fit(t, g, second, lambda);
}

SplineFit fit_spline(const BrightnessSeries& series, std::span<const double> lambda_grid,
                     int folds, std::optional<std::uint64_t> fold_seed) {
  const std::size_t n = series.values.size();
  if (n < 4) fail(Errc::too_few_points, "cross-validated spline fit needs T >= 4");
  if (lambda_grid.empty()) fail(Errc::invalid_argument, "lambda grid is empty");
  if (folds < 2) fail(Errc::invalid_argument, "folds must be >= 2");

  std::vector<double> t(n);
  std::iota(t.begin(), t.end(), 0.0);
  const auto& y = series.values;
  const auto assign = fold_assignment(n, folds, fold_seed);

  double best_score = std::numeric_limits<double>::infinity();
  double best_lambda = lambda_grid.front();
  for (double lambda : lambda_grid) {
    double sq_err = 0.0;
    std::size_t held_out = 0;
    for (int f = 0; f < folds; ++f) {
      std::vector<double> tt, ty;
      std::vector<std::size_t> held;
      for (std::size_t i = 0; i < n; ++i) {
        if (assign[i] == f) {
          held.push_back(i);
        } else {
          tt.push_back(t[i]);
          ty.push_back(y[i]);
        }
      }
      if (held.empty()) continue;
      if (tt.size() < 3) fail(Errc::too_few_points, "fold leaves fewer than 3 training points");
      const SplineFit fit = fit_smoothing_spline(tt, ty, lambda);
      for (std::size_t i : held) {
        const double e = fit.evaluate(t[i]) - y[i];
        sq_err += e * e;
      }
      held_out += held.size();
    }
    const double score = sq_err / static_cast<double>(held_out);
    if (score < best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }

  SplineFit fit = fit_smoothing_spline(t, y, best_lambda);
  fit.cv_score = best_score;
  return fit;
}

VideoStack correct_brightness(const VideoStack& stack, std::span<const double> trend,
                              CorrectionMode mode) {
  stack.validate();
  (void)mode;  // both modes share the arithmetic; the trend source differs
  if (trend.size() != static_cast<std::size_t>(stack.frames))
    fail(Errc::length_mismatch, "trend length does not match frame count");

  double mean = 0.0;
  for (double v : trend) mean += v;
  mean /= static_cast<double>(trend.size());

  VideoStack out = stack;
  const std::size_t per_frame = static_cast<std::size_t>(stack.rows) * stack.cols;
  parallel_for(static_cast<std::size_t>(stack.frames), [&](std::size_t t) {
    const double shift = mean - trend[t];
    const std::size_t base = t * per_frame;
    for (std::size_t i = 0; i < per_frame; ++i)
      out.data[base + i] = static_cast<float>(stack.data[base + i] + shift);
  });
  return out;
}

}  // namespace temsig
