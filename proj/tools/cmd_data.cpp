// convert + synth: artifact plumbing between TVS/PGM/CSV and the synthetic
// generators with their truth sidecars.
#include <cstdio>
#include <fstream>

#include "commands.hpp"
#include "temsig/errors.hpp"
#include "temsig/io.hpp"
#include "temsig/synth.hpp"

namespace temsig::tools {

namespace fs = std::filesystem;

void write_sidecar(const fs::path& primary_output, const ordered_json& config) {
  fs::path path = primary_output;
  path += ".config.json";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_failure, "cannot write sidecar " + path.string());
  out << config.dump(2) << '\n';
}

void cmd_convert(const ConvertOptions& o) {
  if (o.in.empty()) fail(Errc::invalid_argument, "convert: 'in' is required");
  if (o.info) {
    std::printf("%s\n", read_header_line(o.in).c_str());
    return;
  }
  if (o.out.empty()) fail(Errc::invalid_argument, "convert: 'out' is required");
  const VideoStack stack = read_stack(o.in);
  if (o.frame < 0 || o.frame >= stack.frames)
    fail(Errc::invalid_argument, "convert: 'frame' out of range");

  const fs::path out = o.out;
  if (out.extension() == ".pgm") {
    HeatmapScale scale;
    scale.min = o.scale_min;
    scale.max = o.scale_max;
    export_heatmap(stack.frame(o.frame), out, scale);
  } else if (out.extension() == ".csv") {
    const Image img = stack.frame(o.frame);
    std::vector<std::vector<double>> rows(img.rows(), std::vector<double>(img.cols()));
    std::vector<std::string> header(img.cols());
    for (int c = 0; c < img.cols(); ++c) header[c] = "c" + std::to_string(c);
    for (int r = 0; r < img.rows(); ++r)
      for (int c = 0; c < img.cols(); ++c) rows[r][c] = img(r, c);
    write_csv_matrix(rows, header, out);
  } else {
    fail(Errc::invalid_argument, "convert: 'out' must end in .pgm or .csv");
  }
  write_sidecar(out, to_json(o));
}

namespace {

ordered_json image_stats_json(const Image& onset) {
  int finite = 0;
  for (double v : onset.data())
    if (std::isfinite(v)) ++finite;
  ordered_json j;
  j["corroded_pixels"] = finite;
  return j;
}

void synth_corrosion(const SynthOptions& o) {
  synth::CorrosionVideoSpec spec;
  spec.rows = o.rows;
  spec.cols = o.cols;
  spec.frames = o.frames;
  spec.base = o.base;
  spec.delta = o.delta;
  spec.sigma = o.sigma;
  spec.drift_amplitude = o.drift_amplitude;
  spec.front_row = o.front_row;
  spec.front_col = o.front_col;
  spec.rho0 = o.rho0;
  spec.speed = o.speed;
  spec.frame_interval = o.frame_interval;
  spec.pixel_size = o.pixel_size;
  spec.seed = o.seed;
  const auto video = synth::gen_corrosion_video(spec);
  write_stack(video.stack, o.out);

  ordered_json truth;
  truth["kind"] = "corrosion_video";
  truth["base"] = video.truth.base;
  truth["delta"] = video.truth.delta;
  truth["drift"] = video.truth.drift;
  truth["summary"] = image_stats_json(video.truth.onset_frame);
  // the full onset map rides along as a TVS for exact comparisons
  VideoStack onset(1, spec.rows, spec.cols);
  for (int r = 0; r < spec.rows; ++r)
    for (int c = 0; c < spec.cols; ++c) {
      const double v = video.truth.onset_frame(r, c);
      onset.at(0, r, c) = std::isfinite(v) ? static_cast<float>(v) : -1.0f;
    }
  fs::path onset_path = fs::path(o.out);
  onset_path += ".onset.tvs";
  write_stack(onset, onset_path);
  truth["onset_map"] = onset_path.filename().string();
  fs::path truth_path = fs::path(o.out);
  truth_path += ".truth.json";
  std::ofstream tf(truth_path, std::ios::binary | std::ios::trunc);
  tf << truth.dump(2) << '\n';
}

void synth_ring(const SynthOptions& o) {
  synth::RingPatternSpec spec;
  spec.rows = o.rows;
  spec.cols = o.cols;
  spec.center_row = o.center_row;
  spec.center_col = o.center_col;
  spec.center_intensity = o.center_intensity;
  spec.center_width = o.center_width;
  for (const auto& r : o.rings) {
    if (r.size() != 3) fail(Errc::invalid_argument, "rings entries are [radius,intensity,width]");
    spec.rings.push_back({r[0], r[1], r[2]});
  }
  std::vector<synth::SpotSpec> spots;
  for (const auto& s : o.spots) {
    if (s.size() != 4)
      fail(Errc::invalid_argument, "spots entries are [radius,angle_deg,intensity,width]");
    spots.push_back({s[0], s[1], s[2], s[3]});
  }
  if (o.needle) {
    if (o.needle->size() != 2)
      fail(Errc::invalid_argument, "needle is [angle_deg, half_width]");
    spec.needle = synth::NeedleSpec{(*o.needle)[0], (*o.needle)[1]};
  }
  spec.sigma = o.sigma;

  // frames > 1 makes a video; spots switch on at spot_onset
  const int frames = std::max(1, o.frames);
  VideoStack stack(frames, spec.rows, spec.cols);
  synth::RingPattern ring;
  for (int t = 0; t < frames; ++t) {
    synth::RingPatternSpec frame_spec = spec;
    const bool spots_on = o.spot_onset < 0 || t >= o.spot_onset;
    if (spots_on) frame_spec.spots = spots;
    frame_spec.seed = o.seed + static_cast<std::uint64_t>(t);
    ring = synth::gen_ring_pattern(frame_spec);
    stack.set_frame(t, ring.image);
  }
  write_stack(stack, o.out);

  ordered_json truth;
  truth["kind"] = "ring_pattern";
  truth["center_row"] = ring.truth.center_row;
  truth["center_col"] = ring.truth.center_col;
  truth["rings"] = o.rings;
  truth["spots"] = o.spots;
  truth["spot_onset"] = o.spot_onset;
  if (spec.needle) {
    VideoStack mask(1, spec.rows, spec.cols);
    for (int r = 0; r < spec.rows; ++r)
      for (int c = 0; c < spec.cols; ++c)
        mask.at(0, r, c) = ring.truth.mask.at(r, c) ? 1.0f : 0.0f;
    fs::path mask_path = fs::path(o.out);
    mask_path += ".mask.tvs";
    write_stack(mask, mask_path);
    truth["mask"] = mask_path.filename().string();
  }
  fs::path truth_path = fs::path(o.out);
  truth_path += ".truth.json";
  std::ofstream tf(truth_path, std::ios::binary | std::ios::trunc);
  tf << truth.dump(2) << '\n';
}

void synth_stream(const SynthOptions& o) {
  synth::SparseStreamSpec spec;
  spec.d = o.d;
  spec.length = o.length;
  spec.change_point = o.change_point;
  spec.support = o.support;
  spec.magnitude = o.magnitude;
  spec.seed = o.seed;
  const auto stream = synth::gen_sparse_stream(spec);

  std::vector<std::string> header(spec.d);
  for (int i = 0; i < spec.d; ++i) header[i] = "x" + std::to_string(i);
  write_csv_matrix(stream.samples, header, o.out);

  ordered_json truth;
  truth["kind"] = "sparse_stream";
  truth["change_point"] = stream.change_point;
  truth["theta"] = stream.theta;
  fs::path truth_path = fs::path(o.out);
  truth_path += ".truth.json";
  std::ofstream tf(truth_path, std::ios::binary | std::ios::trunc);
  tf << truth.dump(2) << '\n';
}

synth::FieldSpec field_from_options(const SynthOptions& o) {
  synth::FieldSpec field;
  if (o.field == "constant")
    field.kind = synth::FieldKind::constant;
  else if (o.field == "ramp")
    field.kind = synth::FieldKind::ramp;
  else if (o.field == "blob")
    field.kind = synth::FieldKind::blob;
  else
    fail(Errc::invalid_argument, "field must be constant|ramp|blob");
  if (!o.f0.empty()) {
    if (o.f0.size() != 4) fail(Errc::invalid_argument, "f0 needs 4 entries");
    field.f0 = {o.f0[0], o.f0[1], o.f0[2], o.f0[3]};
  }
  field.blob_strain = o.blob_strain;
  field.blob_rotation_deg = o.blob_rotation_deg;
  field.blob_sigma = o.blob_sigma;
  return field;
}

void synth_nbed(const SynthOptions& o) {
  synth::NbedGridSpec spec;
  spec.scan_p = o.scan_p;
  spec.scan_q = o.scan_q;
  spec.rows = o.rows;
  spec.cols = o.cols;
  for (const auto& g : o.gref) {
    if (g.size() != 2) fail(Errc::invalid_argument, "gref entries are [x, y]");
    spec.gref.push_back({g[0], g[1]});
  }
  if (spec.gref.empty())
    spec.gref = {{18.0, 0.0}, {0.0, 18.0}, {-18.0, 0.0}, {0.0, -18.0}};
  spec.field = field_from_options(o);
  spec.bullseye = o.bullseye;
  spec.ring_count = o.ring_count;
  spec.disk_radius = o.disk_radius;
  spec.center_intensity = o.center_disk_intensity;
  spec.satellite_intensity = o.satellite_intensity;
  spec.sigma = o.sigma;
  spec.background = o.background;
  spec.seed = o.seed;
  const auto grid = synth::gen_nbed_grid(spec);
  write_grid(grid.grid, o.out);

  ordered_json truth;
  truth["kind"] = "nbed_grid";
  ordered_json fields = ordered_json::array();
  for (const auto& f : grid.truth.f) fields.push_back({f.a11, f.a12, f.a21, f.a22});
  truth["f"] = fields;
  ordered_json gv = ordered_json::array();
  for (const auto& g : spec.gref) gv.push_back({g.x, g.y});
  truth["gref"] = gv;
  fs::path truth_path = fs::path(o.out);
  truth_path += ".truth.json";
  std::ofstream tf(truth_path, std::ios::binary | std::ios::trunc);
  tf << truth.dump(2) << '\n';
}

void synth_disk_pair(const SynthOptions& o) {
  synth::DiskPairSpec spec;
  spec.rows = o.rows;
  spec.cols = o.cols;
  spec.bullseye = o.bullseye;
  spec.ring_count = o.ring_count;
  spec.radius = o.disk_radius;
  spec.shift_x = o.shift_x;
  spec.shift_y = o.shift_y;
  spec.sigma = o.sigma;
  spec.background = o.background;
  spec.seed = o.seed;
  const auto pair = synth::gen_disk_pair(spec);

  VideoStack stack(2, spec.rows, spec.cols);
  stack.set_frame(0, pair.reference);
  stack.set_frame(1, pair.shifted);
  write_stack(stack, o.out);

  ordered_json truth;
  truth["kind"] = "disk_pair";
  truth["shift_x"] = pair.shift_x;
  truth["shift_y"] = pair.shift_y;
  fs::path truth_path = fs::path(o.out);
  truth_path += ".truth.json";
  std::ofstream tf(truth_path, std::ios::binary | std::ios::trunc);
  tf << truth.dump(2) << '\n';
}

}  // namespace

void cmd_synth(const SynthOptions& o) {
  if (o.out.empty()) fail(Errc::invalid_argument, "synth: 'out' is required");
  if (o.kind == "corrosion_video")
    synth_corrosion(o);
  else if (o.kind == "ring_pattern")
    synth_ring(o);
  else if (o.kind == "sparse_stream")
    synth_stream(o);
  else if (o.kind == "nbed_grid")
    synth_nbed(o);
  else if (o.kind == "disk_pair")
    synth_disk_pair(o);
  else
    fail(Errc::invalid_argument,
         "synth: kind must be corrosion_video|ring_pattern|sparse_stream|nbed_grid|disk_pair");
  write_sidecar(o.out, to_json(o));
}

}  // namespace temsig::tools
