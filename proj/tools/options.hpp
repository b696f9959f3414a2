// Option structs for every subcommand. The JSON config schema and the flag
// surface are the same set of keys (dashes in flags, underscores in JSON);
// apply_json rejects unknown keys and the sidecar echo round-trips through
// the same functions.
#ifndef TEMSIG_TOOLS_OPTIONS_HPP
#define TEMSIG_TOOLS_OPTIONS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace temsig::tools {

using ordered_json = nlohmann::ordered_json;

struct ConvertOptions {
  std::string in;
  std::string out;
  int frame = 0;
  std::optional<double> scale_min;
  std::optional<double> scale_max;
  bool info = false;
};

struct SynthOptions {
  std::string kind = "corrosion_video";
  std::string out;
  std::uint64_t seed = 0;

  // corrosion_video
  int rows = 64, cols = 64, frames = 100;
  double base = 1.0, delta = 1.0, sigma = 0.0;
  double drift_amplitude = 0.0;
  double front_row = -1.0, front_col = -1.0;
  double rho0 = 0.0, speed = 0.0;
  std::optional<double> frame_interval;
  std::optional<double> pixel_size;

  // ring_pattern (structured pieces are JSON-only); frames > 1 emits a video
  // whose spots switch on at spot_onset (a change-point fixture)
  double center_row = -1.0, center_col = -1.0;
  double center_intensity = 1.0, center_width = 3.0;
  std::vector<std::vector<double>> rings;        // [radius, intensity, width]
  std::vector<std::vector<double>> spots;        // [radius, angle_deg, intensity, width]
  std::optional<std::vector<double>> needle;     // [angle_deg, half_width]
  int spot_onset = -1;                           // frame index; < 0 -> always on

  // sparse_stream
  int d = 100, length = 200;
  long change_point = 100;
  int support = 5;
  double magnitude = 0.5;

  // nbed_grid / disk_pair
  int scan_p = 8, scan_q = 8;
  std::vector<std::vector<double>> gref;  // [x, y] pairs
  std::string field = "constant";         // constant | ramp | blob
  std::vector<double> f0;                 // 4 entries, row-major
  double blob_strain = 0.0, blob_rotation_deg = 0.0, blob_sigma = 2.0;
  double disk_radius = 6.0;
  bool bullseye = false;
  int ring_count = 4;
  double center_disk_intensity = 3.0, satellite_intensity = 1.0;
  double background = 0.0;
  double shift_x = 0.0, shift_y = 0.0;
};

struct DenoiseOptions {
  std::string in;
  std::string out;
  std::string mode = "to_mean";  // to_mean | spline
  std::vector<double> lambda_grid;
  int folds = 5;
  std::string filter = "none";  // none | mean | bilateral
  int radius = 1;
  std::string metric = "chebyshev";
  double sigma_s = 1.0;
  double sigma_v = 1.0;
  std::string order = "correct_first";  // correct_first | filter_first
};

struct SegmentOptions {
  std::string in;
  std::string out_dir;
  double quantile = 0.99;
  std::string quantile_scope = "video";  // video | frame
  int smooth_radius = 1;
  double smooth_fraction = 0.5;
  bool no_smooth = false;
};

struct PolarOptions {
  std::string in;
  std::string out_dir;
  double r_min = 5.0;
  double r_max = 60.0;
  double dtheta = 1.0;
  double dr = 1.0;
  double band_r0 = 0.0;
  double band_width = 3.0;
  std::string mask;  // TVS file, optional
  double canny_sigma = 2.0;
  double canny_low = 0.05;
  double canny_high = 0.15;
  double hough_bin = 1.0;
  bool no_align = false;
  std::optional<std::vector<double>> derive_mask;  // [lo, hi]
};

struct DetectOptions {
  std::string in;
  std::string out_dir;
  std::string procedure = "acm";  // acm | asr | cusum | glr
  int window = 50;
  std::optional<double> threshold;
  std::optional<double> calibrate_arl;
  int calibrate_runs = 1000;
  long max_len = 0;  // 0 -> 5 * target ARL
  double l1_radius = 1.0;
  std::string eta_mode = "decay";  // decay | const
  double eta = 1.0;
  std::string cusum_mean_file;
  double cusum_mean_fill = 1.0;  // used when no file is given
  int standardize_baseline = 0;  // frames used to normalize raw signals
  std::uint64_t seed = 0;
};

struct NbedOptions {
  std::string in;
  std::string out_dir;
  std::string reference = "point:0,0";  // point:p,q
  std::string reference_disk_file;      // measured disk TVS (frame 0)
  std::vector<std::vector<double>> gvecs;  // explicit reference g-vectors
  double gamma = 0.5;
  std::string prefilter = "sobel";  // none | sobel
  int expected_disks = 5;
  int kappa = 16;
  double disk_radius = 6.0;
  std::string disk_kind = "flat";  // flat | bullseye
  int ring_count = 1;
};

struct PipelineOptions {
  std::string out_dir;
  std::uint64_t seed = 0;
  ordered_json stages = ordered_json::array();
};

// JSON <-> struct. apply_json throws temsig::Error(invalid_argument) naming
// any unknown key; to_json emits the full resolved set for the sidecar.
void apply_json(ConvertOptions& o, const nlohmann::json& j);
void apply_json(SynthOptions& o, const nlohmann::json& j);
void apply_json(DenoiseOptions& o, const nlohmann::json& j);
void apply_json(SegmentOptions& o, const nlohmann::json& j);
void apply_json(PolarOptions& o, const nlohmann::json& j);
void apply_json(DetectOptions& o, const nlohmann::json& j);
void apply_json(NbedOptions& o, const nlohmann::json& j);
void apply_json(PipelineOptions& o, const nlohmann::json& j);

ordered_json to_json(const ConvertOptions& o);
ordered_json to_json(const SynthOptions& o);
ordered_json to_json(const DenoiseOptions& o);
ordered_json to_json(const SegmentOptions& o);
ordered_json to_json(const PolarOptions& o);
ordered_json to_json(const DetectOptions& o);
ordered_json to_json(const NbedOptions& o);
ordered_json to_json(const PipelineOptions& o);

}  // namespace temsig::tools

#endif
