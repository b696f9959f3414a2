#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <string>

#include "commands.hpp"
#include "options.hpp"
#include "temsig/errors.hpp"

namespace {

using namespace temsig;
using namespace temsig::tools;

struct AllOptions {
  ConvertOptions convert;
  SynthOptions synth;
  DenoiseOptions denoise;
  SegmentOptions segment;
  PolarOptions polar;
  DetectOptions detect;
  NbedOptions nbed;
  PipelineOptions pipeline;
  std::string config_convert, config_synth, config_denoise, config_segment;
  std::string config_polar, config_detect, config_nbed, config_pipeline;
};

std::unique_ptr<CLI::App> build_app(AllOptions& o, std::string& chosen) {
  auto app = std::make_unique<CLI::App>(
      "temsig: TEM video and diffraction signal-processing toolkit");
  app->require_subcommand(0, 1);

  auto* convert = app->add_subcommand("convert", "TVS frame export (PGM heatmap / CSV)");
  convert->add_option("--config", o.config_convert, "JSON config file");
  convert->add_option("--in", o.convert.in, "input TVS file");
  convert->add_option("--out", o.convert.out, "output file (.pgm or .csv)");
  convert->add_option("--frame", o.convert.frame, "frame index");
  convert->add_option("--scale-min", o.convert.scale_min, "heatmap scale minimum");
  convert->add_option("--scale-max", o.convert.scale_max, "heatmap scale maximum");
  convert->add_flag("--info", o.convert.info, "print the TVS header and exit");
  convert->callback([&] { chosen = "convert"; });

  auto* synth = app->add_subcommand("synth", "synthetic data generators with truth sidecars");
  synth->add_option("--config", o.config_synth, "JSON config file");
  synth->add_option("--kind", o.synth.kind,
                    "corrosion_video|ring_pattern|sparse_stream|nbed_grid|disk_pair");
  synth->add_option("--out", o.synth.out, "output path (.tvs, .csv for sparse_stream)");
  synth->add_option("--seed", o.synth.seed, "generator seed");
  synth->add_option("--rows", o.synth.rows, "image rows");
  synth->add_option("--cols", o.synth.cols, "image cols");
  synth->add_option("--frames", o.synth.frames, "video frames");
  synth->add_option("--base", o.synth.base, "base intensity");
  synth->add_option("--delta", o.synth.delta, "corrosion step height");
  synth->add_option("--sigma", o.synth.sigma, "pixel noise");
  synth->add_option("--drift-amplitude", o.synth.drift_amplitude, "global drift amplitude");
  synth->add_option("--rho0", o.synth.rho0, "initial front radius");
  synth->add_option("--speed", o.synth.speed, "front speed (px/frame)");
  synth->add_option("--front-row", o.synth.front_row, "front seed row");
  synth->add_option("--front-col", o.synth.front_col, "front seed col");
  synth->add_option("--frame-interval", o.synth.frame_interval, "seconds per frame");
  synth->add_option("--pixel-size", o.synth.pixel_size, "nm per pixel");
  synth->add_option("--d", o.synth.d, "stream dimension");
  synth->add_option("--length", o.synth.length, "stream length");
  synth->add_option("--change-point", o.synth.change_point, "change point nu");
  synth->add_option("--support", o.synth.support, "sparse support s*");
  synth->add_option("--magnitude", o.synth.magnitude, "per-coordinate shift mu");
  synth->add_option("--scan-p", o.synth.scan_p, "scan rows");
  synth->add_option("--scan-q", o.synth.scan_q, "scan cols");
  synth->add_option("--field", o.synth.field, "deformation field: constant|ramp|blob");
  synth->add_option("--blob-strain", o.synth.blob_strain, "blob peak isotropic strain");
  synth->add_option("--blob-rotation-deg", o.synth.blob_rotation_deg, "blob peak rotation");
  synth->add_option("--blob-sigma", o.synth.blob_sigma, "blob width (scan points)");
  synth->add_option("--disk-radius", o.synth.disk_radius, "diffraction disk radius");
  synth->add_flag("--bullseye", o.synth.bullseye, "bullseye disks");
  synth->add_option("--ring-count", o.synth.ring_count, "bullseye ring count");
  synth->add_option("--background", o.synth.background, "low-frequency background amplitude");
  synth->add_option("--spot-onset", o.synth.spot_onset, "frame at which spots appear (<0: always)");
  synth->add_option("--shift-x", o.synth.shift_x, "disk pair shift x");
  synth->add_option("--shift-y", o.synth.shift_y, "disk pair shift y");
  synth->callback([&] { chosen = "synth"; });

  auto* denoise = app->add_subcommand("denoise", "brightness correction and spatial filters");
  denoise->add_option("--config", o.config_denoise, "JSON config file");
  denoise->add_option("--in", o.denoise.in, "input TVS");
  denoise->add_option("--out", o.denoise.out, "corrected TVS");
  denoise->add_option("--mode", o.denoise.mode, "to_mean|spline");
  denoise->add_option("--lambda-grid", o.denoise.lambda_grid,
                      "spline penalty grid (default: 13 log-spaced 1e-3..1e3)");
  denoise->add_option("--folds", o.denoise.folds, "CV folds");
  denoise->add_option("--filter", o.denoise.filter, "none|mean|bilateral");
  denoise->add_option("--radius", o.denoise.radius, "filter radius");
  denoise->add_option("--metric", o.denoise.metric, "chebyshev|euclidean");
  denoise->add_option("--sigma-s", o.denoise.sigma_s, "bilateral spatial sigma");
  denoise->add_option("--sigma-v", o.denoise.sigma_v, "bilateral value sigma");
  denoise->add_option("--order", o.denoise.order, "correct_first|filter_first");
  denoise->callback([&] { chosen = "denoise"; });

  auto* segment = app->add_subcommand("segment", "quantile onset labeling and stats");
  segment->add_option("--config", o.config_segment, "JSON config file");
  segment->add_option("--in", o.segment.in, "input TVS");
  segment->add_option("--out-dir", o.segment.out_dir, "output directory");
  segment->add_option("--quantile", o.segment.quantile, "switch quantile");
  segment->add_option("--quantile-scope", o.segment.quantile_scope, "video|frame");
  segment->add_option("--smooth-radius", o.segment.smooth_radius, "majority radius");
  segment->add_option("--smooth-fraction", o.segment.smooth_fraction, "majority fraction");
  segment->add_flag("--no-smooth", o.segment.no_smooth, "skip majority smoothing");
  segment->callback([&] { chosen = "segment"; });

  auto* polar = app->add_subcommand("polar", "polar transform and band signals");
  polar->add_option("--config", o.config_polar, "JSON config file");
  polar->add_option("--in", o.polar.in, "input TVS of diffraction frames");
  polar->add_option("--out-dir", o.polar.out_dir, "output directory");
  polar->add_option("--r-min", o.polar.r_min, "Hough radius search minimum");
  polar->add_option("--r-max", o.polar.r_max, "Hough radius search maximum");
  polar->add_option("--dtheta", o.polar.dtheta, "degrees per angular bin");
  polar->add_option("--dr", o.polar.dr, "pixels per radial bin");
  polar->add_option("--band-r0", o.polar.band_r0, "band inner radius");
  polar->add_option("--band-width", o.polar.band_width, "band width");
  polar->add_option("--mask", o.polar.mask, "beam-stop mask TVS");
  polar->add_option("--canny-sigma", o.polar.canny_sigma, "Canny blur sigma");
  polar->add_option("--canny-low", o.polar.canny_low, "Canny low threshold");
  polar->add_option("--canny-high", o.polar.canny_high, "Canny high threshold");
  polar->add_option("--hough-bin", o.polar.hough_bin, "Hough accumulator bin size");
  polar->add_flag("--no-align", o.polar.no_align, "skip per-frame center alignment");
  polar->add_option("--derive-mask", o.polar.derive_mask,
                    "derive beam-stop mask from band (lo hi)")
      ->expected(2);
  polar->callback([&] { chosen = "polar"; });

  auto* detect = app->add_subcommand("detect", "online change-point detection");
  detect->add_option("--config", o.config_detect, "JSON config file");
  detect->add_option("--in", o.detect.in, "signal matrix CSV or TVS");
  detect->add_option("--out-dir", o.detect.out_dir, "output directory");
  detect->add_option("--procedure", o.detect.procedure, "acm|asr|cusum|glr");
  detect->add_option("--window", o.detect.window, "window size w");
  detect->add_option("--threshold", o.detect.threshold, "stopping threshold b");
  detect->add_option("--calibrate-arl", o.detect.calibrate_arl,
                     "calibrate b to this average run length");
  detect->add_option("--calibrate-runs", o.detect.calibrate_runs, "Monte Carlo runs");
  detect->add_option("--max-len", o.detect.max_len, "null-run horizon (0: 5x target)");
  detect->add_option("--l1-radius", o.detect.l1_radius, "l1 ball radius s");
  detect->add_option("--eta-mode", o.detect.eta_mode, "decay|const");
  detect->add_option("--eta", o.detect.eta, "constant step size");
  detect->add_option("--cusum-mean-file", o.detect.cusum_mean_file,
                     "CSV (one row) with the CUSUM post-change mean");
  detect->add_option("--cusum-mean-fill", o.detect.cusum_mean_fill,
                     "fill value when no mean file is given");
  detect->add_option("--standardize-baseline", o.detect.standardize_baseline,
                     "frames used to standardize raw signals (0: off)");
  detect->add_option("--seed", o.detect.seed, "calibration seed");
  detect->callback([&] { chosen = "detect"; });

  auto* nbed = app->add_subcommand("nbed", "diffraction-disk registration and strain maps");
  nbed->add_option("--config", o.config_nbed, "JSON config file");
  nbed->add_option("--in", o.nbed.in, "input grid TVS (scan_p/scan_q header keys)");
  nbed->add_option("--out-dir", o.nbed.out_dir, "output directory");
  nbed->add_option("--reference", o.nbed.reference, "reference scan point: point:p,q");
  nbed->add_option("--reference-disk", o.nbed.reference_disk_file,
                   "measured reference disk TVS");
  nbed->add_option("--gamma", o.nbed.gamma, "hybrid correlation exponent [0,1]");
  nbed->add_option("--prefilter", o.nbed.prefilter, "none|sobel");
  nbed->add_option("--expected-disks", o.nbed.expected_disks, "disks per pattern");
  nbed->add_option("--kappa", o.nbed.kappa, "subpixel upsampling factor");
  nbed->add_option("--disk-radius", o.nbed.disk_radius, "reference disk radius");
  nbed->add_option("--disk-kind", o.nbed.disk_kind, "flat|bullseye");
  nbed->add_option("--ring-count", o.nbed.ring_count, "bullseye ring count");
  nbed->callback([&] { chosen = "nbed"; });

  auto* pipeline = app->add_subcommand("pipeline", "run a type-checked stage chain");
  pipeline->add_option("--config", o.config_pipeline, "JSON config with the stage list")
      ->required();
  pipeline->add_option("--out-dir", o.pipeline.out_dir, "output directory");
  pipeline->add_option("--seed", o.pipeline.seed, "top-level seed");
  pipeline->callback([&] { chosen = "pipeline"; });

  return app;
}

nlohmann::json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_failure, "cannot open config " + path);
  nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
  if (j.is_discarded()) fail(Errc::invalid_argument, "config is not valid JSON: " + path);
  return j;
}

int dispatch(const std::string& chosen, const AllOptions& o) {
  if (chosen == "convert") cmd_convert(o.convert);
  else if (chosen == "synth") cmd_synth(o.synth);
  else if (chosen == "denoise") cmd_denoise(o.denoise);
  else if (chosen == "segment") cmd_segment(o.segment);
  else if (chosen == "polar") cmd_polar(o.polar);
  else if (chosen == "detect") cmd_detect(o.detect);
  else if (chosen == "nbed") cmd_nbed(o.nbed);
  else if (chosen == "pipeline") cmd_pipeline(o.pipeline);
  else {
    std::fprintf(stderr, "temsig: no subcommand given (see --help)\n");
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  AllOptions options;
  std::string chosen;

  // pass 1: learn the subcommand and its --config path
  {
    auto app = build_app(options, chosen);
    try {
      app->parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
      return app->exit(e);  // prints help, exit 0
    } catch (const CLI::ParseError& e) {
      app->exit(e);
      return 1;
    } catch (const Error& e) {
      std::fprintf(stderr, "temsig: %s\n", e.what());
      return 1;
    }
  }

  // apply the JSON config (if any) under the flag values: reset the structs,
  // load JSON, then reparse so explicit flags win
  try {
    const std::string config_path =
        chosen == "convert"    ? options.config_convert
        : chosen == "synth"    ? options.config_synth
        : chosen == "denoise"  ? options.config_denoise
        : chosen == "segment"  ? options.config_segment
        : chosen == "polar"    ? options.config_polar
        : chosen == "detect"   ? options.config_detect
        : chosen == "nbed"     ? options.config_nbed
        : chosen == "pipeline" ? options.config_pipeline
                               : std::string();
    if (!config_path.empty()) {
      const nlohmann::json j = load_json_file(config_path);
      options = AllOptions{};
      if (chosen == "convert") apply_json(options.convert, j);
      else if (chosen == "synth") apply_json(options.synth, j);
      else if (chosen == "denoise") apply_json(options.denoise, j);
      else if (chosen == "segment") apply_json(options.segment, j);
      else if (chosen == "polar") apply_json(options.polar, j);
      else if (chosen == "detect") apply_json(options.detect, j);
      else if (chosen == "nbed") apply_json(options.nbed, j);
      else if (chosen == "pipeline") apply_json(options.pipeline, j);

      std::string chosen2;
      auto app = build_app(options, chosen2);
      app->parse(argc, argv);
    }
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "temsig: %s\n", e.what());
    return 1;
  } catch (const Error& e) {
    std::fprintf(stderr, "temsig: %s\n", e.what());
    return e.code() == Errc::invalid_argument || e.code() == Errc::stage_type_mismatch ? 1 : 2;
  }

  try {
    return dispatch(chosen, options);
  } catch (const Error& e) {
    std::fprintf(stderr, "temsig: %s\n", e.what());
    return e.code() == Errc::invalid_argument || e.code() == Errc::stage_type_mismatch ? 1 : 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "temsig: %s\n", e.what());
    return 2;
  }
}
