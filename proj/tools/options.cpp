#include "options.hpp"

#include "temsig/errors.hpp"

namespace temsig::tools {

namespace {

class KeyReader {
 public:
  explicit KeyReader(const nlohmann::json& j) : j_(j) {
    if (!j.is_object()) fail(Errc::invalid_argument, "config must be a JSON object");
  }
  ~KeyReader() = default;

  template <typename T>
  void get(const char* key, T& out) {
    seen_.push_back(key);
    if (j_.contains(key)) out = j_.at(key).get<T>();
  }
  template <typename T>
  void get_optional(const char* key, std::optional<T>& out) {
    seen_.push_back(key);
    if (j_.contains(key) && !j_.at(key).is_null()) out = j_.at(key).get<T>();
  }
  void get_json(const char* key, ordered_json& out) {
    seen_.push_back(key);
    if (j_.contains(key)) out = j_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : j_.items()) {
      if (std::find(seen_.begin(), seen_.end(), key) == seen_.end())
        fail(Errc::invalid_argument, "unknown config key '" + key + "'");
    }
  }

 private:
  const nlohmann::json& j_;
  std::vector<std::string> seen_;
};

template <typename T>
void put_optional(ordered_json& j, const char* key, const std::optional<T>& v) {
  if (v)
    j[key] = *v;
  else
    j[key] = nullptr;
}

}  // namespace

void apply_json(ConvertOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("in", o.in);
  r.get("out", o.out);
  r.get("frame", o.frame);
  r.get_optional("scale_min", o.scale_min);
  r.get_optional("scale_max", o.scale_max);
  r.get("info", o.info);
  r.finish();
}

ordered_json to_json(const ConvertOptions& o) {
  ordered_json j;
  j["in"] = o.in;
  j["out"] = o.out;
  j["frame"] = o.frame;
  put_optional(j, "scale_min", o.scale_min);
  put_optional(j, "scale_max", o.scale_max);
  j["info"] = o.info;
  return j;
}

void apply_json(SynthOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("kind", o.kind);
  r.get("out", o.out);
  r.get("seed", o.seed);
  r.get("rows", o.rows);
  r.get("cols", o.cols);
  r.get("frames", o.frames);
  r.get("base", o.base);
  r.get("delta", o.delta);
  r.get("sigma", o.sigma);
  r.get("drift_amplitude", o.drift_amplitude);
  r.get("front_row", o.front_row);
  r.get("front_col", o.front_col);
  r.get("rho0", o.rho0);
  r.get("speed", o.speed);
  r.get_optional("frame_interval", o.frame_interval);
  r.get_optional("pixel_size", o.pixel_size);
  r.get("center_row", o.center_row);
  r.get("center_col", o.center_col);
  r.get("center_intensity", o.center_intensity);
  r.get("center_width", o.center_width);
  r.get("rings", o.rings);
  r.get("spots", o.spots);
  r.get_optional("needle", o.needle);
  r.get("spot_onset", o.spot_onset);
  r.get("d", o.d);
  r.get("length", o.length);
  r.get("change_point", o.change_point);
  r.get("support", o.support);
  r.get("magnitude", o.magnitude);
  r.get("scan_p", o.scan_p);
  r.get("scan_q", o.scan_q);
  r.get("gref", o.gref);
  r.get("field", o.field);
  r.get("f0", o.f0);
  r.get("blob_strain", o.blob_strain);
  r.get("blob_rotation_deg", o.blob_rotation_deg);
  r.get("blob_sigma", o.blob_sigma);
  r.get("disk_radius", o.disk_radius);
  r.get("bullseye", o.bullseye);
  r.get("ring_count", o.ring_count);
  r.get("center_disk_intensity", o.center_disk_intensity);
  r.get("satellite_intensity", o.satellite_intensity);
  r.get("background", o.background);
  r.get("shift_x", o.shift_x);
  r.get("shift_y", o.shift_y);
  r.finish();
}

ordered_json to_json(const SynthOptions& o) {
  ordered_json j;
  j["kind"] = o.kind;
  j["out"] = o.out;
  j["seed"] = o.seed;
  j["rows"] = o.rows;
  j["cols"] = o.cols;
  j["frames"] = o.frames;
  j["base"] = o.base;
  j["delta"] = o.delta;
  j["sigma"] = o.sigma;
  j["drift_amplitude"] = o.drift_amplitude;
  j["front_row"] = o.front_row;
  j["front_col"] = o.front_col;
  j["rho0"] = o.rho0;
  j["speed"] = o.speed;
  put_optional(j, "frame_interval", o.frame_interval);
  put_optional(j, "pixel_size", o.pixel_size);
  j["center_row"] = o.center_row;
  j["center_col"] = o.center_col;
  j["center_intensity"] = o.center_intensity;
  j["center_width"] = o.center_width;
  j["rings"] = o.rings;
  j["spots"] = o.spots;
  put_optional(j, "needle", o.needle);
  j["spot_onset"] = o.spot_onset;
  j["d"] = o.d;
  j["length"] = o.length;
  j["change_point"] = o.change_point;
  j["support"] = o.support;
  j["magnitude"] = o.magnitude;
  j["scan_p"] = o.scan_p;
  j["scan_q"] = o.scan_q;
  j["gref"] = o.gref;
  j["field"] = o.field;
  j["f0"] = o.f0;
  j["blob_strain"] = o.blob_strain;
  j["blob_rotation_deg"] = o.blob_rotation_deg;
  j["blob_sigma"] = o.blob_sigma;
  j["disk_radius"] = o.disk_radius;
  j["bullseye"] = o.bullseye;
  j["ring_count"] = o.ring_count;
  j["center_disk_intensity"] = o.center_disk_intensity;
  j["satellite_intensity"] = o.satellite_intensity;
  j["background"] = o.background;
  j["shift_x"] = o.shift_x;
  j["shift_y"] = o.shift_y;
  return j;
}

void apply_json(DenoiseOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("in", o.in);
  r.get("out", o.out);
  r.get("mode", o.mode);
  r.get("lambda_grid", o.lambda_grid);
  r.get("folds", o.folds);
  r.get("filter", o.filter);
  r.get("radius", o.radius);
  r.get("metric", o.metric);
  r.get("sigma_s", o.sigma_s);
  r.get("sigma_v", o.sigma_v);
  r.get("order", o.order);
  r.finish();
}

ordered_json to_json(const DenoiseOptions& o) {
  ordered_json j;
  j["in"] = o.in;
  j["out"] = o.out;
  j["mode"] = o.mode;
  j["lambda_grid"] = o.lambda_grid;
  j["folds"] = o.folds;
  j["filter"] = o.filter;
  j["radius"] = o.radius;
  j["metric"] = o.metric;
  j["sigma_s"] = o.sigma_s;
  j["sigma_v"] = o.sigma_v;
  j["order"] = o.order;
  return j;
}

void apply_json(SegmentOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("in", o.in);
  r.get("out_dir", o.out_dir);
  r.get("quantile", o.quantile);
  r.get("quantile_scope", o.quantile_scope);
  r.get("smooth_radius", o.smooth_radius);
  r.get("smooth_fraction", o.smooth_fraction);
  r.get("no_smooth", o.no_smooth);
  r.finish();
}

ordered_json to_json(const SegmentOptions& o) {
  ordered_json j;
  j["in"] = o.in;
  j["out_dir"] = o.out_dir;
  j["quantile"] = o.quantile;
  j["quantile_scope"] = o.quantile_scope;
  j["smooth_radius"] = o.smooth_radius;
  j["smooth_fraction"] = o.smooth_fraction;
  j["no_smooth"] = o.no_smooth;
  return j;
}

void apply_json(PolarOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("in", o.in);
  r.get("out_dir", o.out_dir);
  r.get("r_min", o.r_min);
  r.get("r_max", o.r_max);
  r.get("dtheta", o.dtheta);
  r.get("dr", o.dr);
  r.get("band_r0", o.band_r0);
  r.get("band_width", o.band_width);
  r.get("mask", o.mask);
  r.get("canny_sigma", o.canny_sigma);
  r.get("canny_low", o.canny_low);
  r.get("canny_high", o.canny_high);
  r.get("hough_bin", o.hough_bin);
  r.get("no_align", o.no_align);
  r.get_optional("derive_mask", o.derive_mask);
  r.finish();
}

ordered_json to_json(const PolarOptions& o) {
  ordered_json j;
  j["in"] = o.in;
  j["out_dir"] = o.out_dir;
  j["r_min"] = o.r_min;
  j["r_max"] = o.r_max;
  j["dtheta"] = o.dtheta;
  j["dr"] = o.dr;
  j["band_r0"] = o.band_r0;
  j["band_width"] = o.band_width;
  j["mask"] = o.mask;
  j["canny_sigma"] = o.canny_sigma;
  j["canny_low"] = o.canny_low;
  j["canny_high"] = o.canny_high;
  j["hough_bin"] = o.hough_bin;
  j["no_align"] = o.no_align;
  put_optional(j, "derive_mask", o.derive_mask);
  return j;
}

void apply_json(DetectOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("in", o.in);
  r.get("out_dir", o.out_dir);
  r.get("procedure", o.procedure);
  r.get("window", o.window);
  r.get_optional("threshold", o.threshold);
  r.get_optional("calibrate_arl", o.calibrate_arl);
  r.get("calibrate_runs", o.calibrate_runs);
  r.get("max_len", o.max_len);
  r.get("l1_radius", o.l1_radius);
  r.get("eta_mode", o.eta_mode);
  r.get("eta", o.eta);
  r.get("cusum_mean_file", o.cusum_mean_file);
  r.get("cusum_mean_fill", o.cusum_mean_fill);
  r.get("standardize_baseline", o.standardize_baseline);
  r.get("seed", o.seed);
  r.finish();
}

ordered_json to_json(const DetectOptions& o) {
  ordered_json j;
  j["in"] = o.in;
  j["out_dir"] = o.out_dir;
  j["procedure"] = o.procedure;
  j["window"] = o.window;
  put_optional(j, "threshold", o.threshold);
  put_optional(j, "calibrate_arl", o.calibrate_arl);
  j["calibrate_runs"] = o.calibrate_runs;
  j["max_len"] = o.max_len;
  j["l1_radius"] = o.l1_radius;
  j["eta_mode"] = o.eta_mode;
  j["eta"] = o.eta;
  j["cusum_mean_file"] = o.cusum_mean_file;
  j["cusum_mean_fill"] = o.cusum_mean_fill;
  j["standardize_baseline"] = o.standardize_baseline;
  j["seed"] = o.seed;
  return j;
}

void apply_json(NbedOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("in", o.in);
  r.get("out_dir", o.out_dir);
  r.get("reference", o.reference);
  r.get("reference_disk_file", o.reference_disk_file);
  r.get("gvecs", o.gvecs);
  r.get("gamma", o.gamma);
  r.get("prefilter", o.prefilter);
  r.get("expected_disks", o.expected_disks);
  r.get("kappa", o.kappa);
  r.get("disk_radius", o.disk_radius);
  r.get("disk_kind", o.disk_kind);
  r.get("ring_count", o.ring_count);
  r.finish();
}

ordered_json to_json(const NbedOptions& o) {
  ordered_json j;
  j["in"] = o.in;
  j["out_dir"] = o.out_dir;
  j["reference"] = o.reference;
  j["reference_disk_file"] = o.reference_disk_file;
  j["gvecs"] = o.gvecs;
  j["gamma"] = o.gamma;
  j["prefilter"] = o.prefilter;
  j["expected_disks"] = o.expected_disks;
  j["kappa"] = o.kappa;
  j["disk_radius"] = o.disk_radius;
  j["disk_kind"] = o.disk_kind;
  j["ring_count"] = o.ring_count;
  return j;
}

void apply_json(PipelineOptions& o, const nlohmann::json& j) {
  KeyReader r(j);
  r.get("out_dir", o.out_dir);
  r.get("seed", o.seed);
  r.get_json("stages", o.stages);
  r.finish();
}

ordered_json to_json(const PipelineOptions& o) {
  ordered_json j;
  j["out_dir"] = o.out_dir;
  j["seed"] = o.seed;
  j["stages"] = o.stages;
  return j;
}

}  // namespace temsig::tools
