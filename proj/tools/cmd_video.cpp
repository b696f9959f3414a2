// denoise + segment: the real-image pipeline of brightness correction,
// spatial filtering, quantile labeling and corrosion statistics.
#include <cmath>

#include "commands.hpp"
#include "temsig/denoise.hpp"
#include "temsig/errors.hpp"
#include "temsig/io.hpp"
#include "temsig/parallel.hpp"
#include "temsig/segment.hpp"

namespace temsig::tools {

namespace fs = std::filesystem;

namespace {

VideoStack apply_spatial_filter(const VideoStack& stack, const DenoiseOptions& o) {
  if (o.filter == "none") return stack;
  FilterConfig cfg;
  cfg.radius = o.radius;
  if (o.metric == "chebyshev")
    cfg.metric = Metric::chebyshev;
  else if (o.metric == "euclidean")
    cfg.metric = Metric::euclidean;
  else
    fail(Errc::invalid_argument, "metric must be chebyshev|euclidean");
  cfg.sigma_spatial = o.sigma_s;
  cfg.sigma_value = o.sigma_v;

  VideoStack out = stack;
  parallel_for(static_cast<std::size_t>(stack.frames), [&](std::size_t t) {
    const Image frame = stack.frame(static_cast<int>(t));
    const Image filtered =
        o.filter == "mean" ? mean_filter(frame, cfg) : bilateral_filter(frame, cfg);
    out.set_frame(static_cast<int>(t), filtered);
  });
  return out;
}

std::vector<double> resolve_trend(const VideoStack& stack, const BrightnessSeries& series,
                                  const DenoiseOptions& o, double& cv_score, double& lambda) {
  cv_score = 0.0;
  lambda = 0.0;
  if (o.mode == "to_mean") return series.values;
  if (o.mode != "spline") fail(Errc::invalid_argument, "mode must be to_mean|spline");
  std::vector<double> grid = o.lambda_grid;
  if (grid.empty())
    for (int i = 0; i < 13; ++i) grid.push_back(std::pow(10.0, -3.0 + 0.5 * i));
  const SplineFit fit = fit_spline(series, grid, o.folds);
  cv_score = fit.cv_score;
  lambda = fit.lambda;
  std::vector<double> t(stack.frames);
  for (int i = 0; i < stack.frames; ++i) t[i] = i;
  return fit.evaluate(t);
}

}  // namespace

void cmd_denoise(const DenoiseOptions& o) {
  if (o.in.empty() || o.out.empty())
    fail(Errc::invalid_argument, "denoise: 'in' and 'out' are required");
  VideoStack stack = read_stack(o.in);

  const bool filter_first = o.order == "filter_first";
  if (o.order != "filter_first" && o.order != "correct_first")
    fail(Errc::invalid_argument, "order must be correct_first|filter_first");

  if (filter_first) stack = apply_spatial_filter(stack, o);

  const BrightnessSeries series = frame_brightness(stack);
  double cv_score = 0.0, lambda = 0.0;
  const std::vector<double> trend = resolve_trend(stack, series, o, cv_score, lambda);
  VideoStack corrected = correct_brightness(
      stack, trend,
      o.mode == "to_mean" ? CorrectionMode::to_mean : CorrectionMode::remove_trend);

  if (!filter_first) corrected = apply_spatial_filter(corrected, o);

  write_stack(corrected, o.out);

  std::vector<double> t(series.values.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  const CsvColumn cols[] = {{"t", t}, {"brightness", series.values}, {"trend", trend}};
  fs::path csv_path = fs::path(o.out);
  csv_path += ".brightness.csv";
  export_csv(cols, csv_path);

  ordered_json sidecar = to_json(o);
  if (o.mode == "spline") {
    sidecar["selected_lambda"] = lambda;
    sidecar["cv_score"] = cv_score;
  }
  write_sidecar(o.out, sidecar);
}

void cmd_segment(const SegmentOptions& o) {
  if (o.in.empty() || o.out_dir.empty())
    fail(Errc::invalid_argument, "segment: 'in' and 'out_dir' are required");
  const VideoStack stack = read_stack(o.in);
  fs::create_directories(o.out_dir);
  const fs::path dir = o.out_dir;

  const Volume diff = forward_difference(stack);

  LabelVideo labels;
  if (o.quantile_scope == "video") {
    const double threshold = quantile_threshold(diff, o.quantile);
    labels = label_onset(diff, threshold, o.quantile).second;
  } else if (o.quantile_scope == "frame") {
    // per-step thresholds: quantile over each difference frame alone
    const std::size_t per_frame = static_cast<std::size_t>(diff.rows()) * diff.cols();
    std::vector<double> thresholds(diff.frames());
    for (int t = 0; t < diff.frames(); ++t) {
      std::vector<double> values(diff.data().begin() + t * per_frame,
                                 diff.data().begin() + (t + 1) * per_frame);
      thresholds[t] = quantile_threshold(std::move(values), o.quantile);
    }
    labels = LabelVideo(stack.frames, stack.rows, stack.cols);
    for (int t = 0; t < diff.frames(); ++t)
      for (int r = 0; r < diff.rows(); ++r)
        for (int c = 0; c < diff.cols(); ++c) {
          const std::uint8_t hit = diff(t, r, c) > thresholds[t] ? 1 : 0;
          labels.set(t + 1, r, c, labels.at(t, r, c) | hit);
        }
  } else {
    fail(Errc::invalid_argument, "quantile_scope must be video|frame");
  }

  if (!o.no_smooth) labels = majority_smooth(labels, o.smooth_radius, o.smooth_fraction);

  const CorrosionStats stats = corrosion_stats(labels, stack.frame_interval, stack.pixel_size);

  VideoStack label_stack(stack.frames, stack.rows, stack.cols);
  label_stack.frame_interval = stack.frame_interval;
  label_stack.pixel_size = stack.pixel_size;
  for (std::size_t i = 0; i < labels.labels.size(); ++i)
    label_stack.data[i] = static_cast<float>(labels.labels[i]);
  write_stack(label_stack, dir / "labels.tvs");

  std::vector<double> t(stats.area_fraction.size());
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = static_cast<double>(i);
  const CsvColumn cols[] = {{"t", t}, {"area_fraction", stats.area_fraction}};
  export_csv(cols, dir / "stats.csv");

  // the +inf never-corroded sentinel maps to the scale maximum in the heatmap
  Image onset_plot = stats.onset_time;
  double max_finite = 0.0;
  for (double v : onset_plot.data())
    if (std::isfinite(v)) max_finite = std::max(max_finite, v);
  for (auto& v : onset_plot.data())
    if (!std::isfinite(v)) v = max_finite;
  export_heatmap(onset_plot, dir / "onset.pgm");
  export_heatmap(stats.velocity, dir / "velocity.pgm");

  write_sidecar(dir / "segment", to_json(o));
}

}  // namespace temsig::tools
