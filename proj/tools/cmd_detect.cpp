// detect: statistic traces, stopping decisions and threshold calibration over
// signal matrices or flattened video frames.
#include <cmath>
#include <fstream>

#include "commands.hpp"
#include "temsig/detect.hpp"
#include "temsig/errors.hpp"
#include "temsig/io.hpp"

namespace temsig::tools {

namespace fs = std::filesystem;

namespace {

std::vector<std::vector<double>> load_samples(const std::string& path) {
  const fs::path p = path;
  if (p.extension() == ".tvs") {
    const VideoStack stack = read_stack(p);
    std::vector<std::vector<double>> rows(stack.frames);
    const std::size_t per_frame = static_cast<std::size_t>(stack.rows) * stack.cols;
    for (int t = 0; t < stack.frames; ++t) {
      rows[t].resize(per_frame);
      for (std::size_t i = 0; i < per_frame; ++i)
        rows[t][i] = stack.data[t * per_frame + i];
    }
    return rows;
  }
  return read_csv_matrix(p);
}

/// Zero-mean unit-variance normalization from the first n baseline rows; the
/// detector model assumes a known N(0, I) pre-change state.
void standardize(std::vector<std::vector<double>>& rows, int baseline) {
  if (baseline < 2 || rows.empty()) return;
  const std::size_t d = rows[0].size();
  const int n = std::min<int>(baseline, static_cast<int>(rows.size()));
  std::vector<double> mean(d, 0.0), var(d, 0.0);
  for (int t = 0; t < n; ++t)
    for (std::size_t i = 0; i < d; ++i) mean[i] += rows[t][i];
  for (auto& m : mean) m /= n;
  for (int t = 0; t < n; ++t)
    for (std::size_t i = 0; i < d; ++i) {
      const double e = rows[t][i] - mean[i];
      var[i] += e * e;
    }
  for (auto& v : var) v = std::max(v / (n - 1), 1e-12);
  for (auto& row : rows)
    for (std::size_t i = 0; i < d; ++i) row[i] = (row[i] - mean[i]) / std::sqrt(var[i]);
}

}  // namespace

void cmd_detect(const DetectOptions& o) {
  if (o.in.empty() || o.out_dir.empty())
    fail(Errc::invalid_argument, "detect: 'in' and 'out_dir' are required");
  std::vector<std::vector<double>> samples = load_samples(o.in);
  if (samples.empty()) fail(Errc::empty_input, "detect: input stream is empty");
  standardize(samples, o.standardize_baseline);

  detect::ProcedureConfig cfg;
  cfg.d = static_cast<int>(samples[0].size());
  cfg.window = o.window;
  cfg.constraint.s = o.l1_radius;
  cfg.eta = o.eta;
  if (o.eta_mode == "decay")
    cfg.eta_mode = detect::EtaMode::decay;
  else if (o.eta_mode == "const")
    cfg.eta_mode = detect::EtaMode::constant;
  else
    fail(Errc::invalid_argument, "eta_mode must be decay|const");
  if (o.procedure == "acm")
    cfg.procedure = detect::Procedure::acm;
  else if (o.procedure == "asr")
    cfg.procedure = detect::Procedure::asr;
  else if (o.procedure == "cusum")
    cfg.procedure = detect::Procedure::cusum;
  else if (o.procedure == "glr")
    cfg.procedure = detect::Procedure::glr;
  else
    fail(Errc::invalid_argument, "procedure must be acm|asr|cusum|glr");

  if (cfg.procedure == detect::Procedure::cusum) {
    if (!o.cusum_mean_file.empty()) {
      const auto rows = read_csv_matrix(o.cusum_mean_file);
      if (rows.size() != 1 || rows[0].size() != static_cast<std::size_t>(cfg.d))
        fail(Errc::dimension_mismatch, "cusum_mean_file must hold one row of d values");
      cfg.cusum_mean = rows[0];
    } else {
      cfg.cusum_mean.assign(cfg.d, o.cusum_mean_fill);
    }
  }

  if (!o.threshold && !o.calibrate_arl)
    fail(Errc::invalid_argument, "detect: give 'threshold' or 'calibrate_arl'");

  fs::create_directories(o.out_dir);
  const fs::path dir = o.out_dir;

  detect::CalibrationResult calibration;
  if (o.calibrate_arl) {
    const long max_len =
        o.max_len > 0 ? o.max_len : static_cast<long>(*o.calibrate_arl * 5.0);
    calibration =
        detect::calibrate_threshold(cfg, *o.calibrate_arl, o.calibrate_runs, max_len, o.seed);
    cfg.threshold = calibration.threshold;
  }
  if (o.threshold) cfg.threshold = *o.threshold;  // explicit threshold wins

  const std::vector<double> trace = detect::statistic_trace(samples, cfg);
  const detect::StopResult result = detect::run(samples, cfg);

  std::vector<double> ts(trace.size());
  for (std::size_t i = 0; i < ts.size(); ++i) ts[i] = static_cast<double>(i + 1);
  const CsvColumn cols[] = {{"t", ts}, {"statistic", trace}};
  export_csv(cols, dir / "statistic.csv");

  ordered_json j;
  j["procedure"] = o.procedure;
  j["threshold"] = cfg.threshold;
  j["stopped"] = result.stopped;
  if (result.stopped)
    j["stop_time"] = result.stop_time;
  else
    j["stop_time"] = nullptr;
  if (result.arg_k)
    j["arg_k"] = *result.arg_k;
  else
    j["arg_k"] = nullptr;
  j["final_statistic"] = result.final_statistic;
  j["theta_estimate"] = result.theta_estimate;
  if (o.calibrate_arl) {
    j["calibration"] = {{"target_arl", *o.calibrate_arl},
                        {"empirical_arl", calibration.empirical_arl},
                        {"censored_fraction", calibration.censored_fraction},
                        {"bisection_steps", calibration.bisection_steps}};
  }
  std::ofstream rf(dir / "stop_result.json", std::ios::binary | std::ios::trunc);
  rf << j.dump(2) << '\n';

  ordered_json sidecar = to_json(o);
  sidecar["resolved_threshold"] = cfg.threshold;
  sidecar["d"] = cfg.d;
  write_sidecar(dir / "detect", sidecar);
}

}  // namespace temsig::tools
