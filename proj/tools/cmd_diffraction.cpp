// polar + nbed: diffraction-space feature extraction and strain mapping.
#include <algorithm>
#include <fstream>

#include "commands.hpp"
#include "temsig/errors.hpp"
#include "temsig/io.hpp"
#include "temsig/nbed.hpp"
#include "temsig/polar.hpp"

namespace temsig::tools {

namespace fs = std::filesystem;

void cmd_polar(const PolarOptions& o) {
  if (o.in.empty() || o.out_dir.empty())
    fail(Errc::invalid_argument, "polar: 'in' and 'out_dir' are required");
  const VideoStack stack = read_stack(o.in);
  fs::create_directories(o.out_dir);
  const fs::path dir = o.out_dir;

  MaskImage mask;
  bool have_mask = false;
  if (!o.mask.empty() && o.derive_mask)
    fail(Errc::invalid_argument, "polar: give either 'mask' or 'derive_mask', not both");
  if (!o.mask.empty()) {
    const VideoStack mask_stack = read_stack(o.mask);
    if (mask_stack.rows != stack.rows || mask_stack.cols != stack.cols)
      fail(Errc::dimension_mismatch, "mask dimensions do not match input");
    mask = MaskImage(stack.rows, stack.cols);
    for (int r = 0; r < stack.rows; ++r)
      for (int c = 0; c < stack.cols; ++c) mask.set(r, c, mask_stack.at(0, r, c) != 0.0f);
    have_mask = true;
  } else if (o.derive_mask) {
    if (o.derive_mask->size() != 2)
      fail(Errc::invalid_argument, "derive_mask is [lo, hi]");
    mask = derive_beamstop_mask(stack.frame(0), (*o.derive_mask)[0], (*o.derive_mask)[1]);
    have_mask = true;
  }

  SignalPipelineConfig cfg;
  cfg.canny_sigma = o.canny_sigma;
  cfg.canny_low = o.canny_low;
  cfg.canny_high = o.canny_high;
  cfg.r_min = o.r_min;
  cfg.r_max = o.r_max;
  cfg.hough_bin = o.hough_bin;
  cfg.dr = o.dr;
  cfg.dtheta = o.dtheta;
  cfg.band_r0 = o.band_r0;
  cfg.band_width = o.band_width;
  cfg.align = !o.no_align;
  cfg.mask = have_mask ? &mask : nullptr;
  const SignalResult result = pattern_sequence_to_signals(stack, cfg);

  // signal matrix: T rows x 360 columns
  std::vector<std::string> header(360);
  for (int deg = 0; deg < 360; ++deg) header[deg] = "deg_" + std::to_string(deg);
  write_csv_matrix(result.signals, header, dir / "signals.csv");

  // per-frame centers
  std::vector<double> ts, xs, ys, rs, votes;
  for (std::size_t t = 0; t < result.centers.size(); ++t) {
    ts.push_back(static_cast<double>(t));
    xs.push_back(result.centers[t].x);
    ys.push_back(result.centers[t].y);
    rs.push_back(result.centers[t].r);
    votes.push_back(result.centers[t].votes);
  }
  const CsvColumn cols[] = {{"t", ts}, {"x", xs}, {"y", ys}, {"r", rs}, {"votes", votes}};
  export_csv(cols, dir / "centers.csv");

  // polar stack: per-frame polar images padded to a common radial extent
  std::vector<PolarImage> polars;
  polars.reserve(stack.frames);
  int max_radial = 0;
  for (int t = 0; t < stack.frames; ++t) {
    double cx = (stack.cols - 1) / 2.0;
    double cy = (stack.rows - 1) / 2.0;
    if (cfg.align) {
      cx = result.centers[t].x;
      cy = result.centers[t].y;
    }
    polars.push_back(to_polar(stack.frame(t), cx, cy, o.dr, o.dtheta,
                              have_mask ? &mask : nullptr));
    max_radial = std::max(max_radial, polars.back().radial_bins);
  }
  VideoStack polar_stack(stack.frames, max_radial, polars.front().angular_bins);
  for (int t = 0; t < stack.frames; ++t)
    for (int rb = 0; rb < polars[t].radial_bins; ++rb)
      for (int tb = 0; tb < polars[t].angular_bins; ++tb)
        polar_stack.at(t, rb, tb) = static_cast<float>(polars[t].value(rb, tb));
  write_stack(polar_stack, dir / "polar.tvs");

  write_sidecar(dir / "polar", to_json(o));
}

void cmd_nbed(const NbedOptions& o) {
  if (o.in.empty() || o.out_dir.empty())
    fail(Errc::invalid_argument, "nbed: 'in' and 'out_dir' are required");
  const DiffractionGrid grid = read_grid(o.in);
  fs::create_directories(o.out_dir);
  const fs::path dir = o.out_dir;

  nbed::StrainMapConfig cfg;
  cfg.gamma = o.gamma;
  cfg.kappa = o.kappa;
  cfg.expected_disks = o.expected_disks;
  cfg.disk_radius = o.disk_radius;
  cfg.ring_count = o.ring_count;
  if (o.disk_kind == "flat")
    cfg.disk = nbed::DiskKind::flat;
  else if (o.disk_kind == "bullseye")
    cfg.disk = nbed::DiskKind::bullseye;
  else
    fail(Errc::invalid_argument, "disk_kind must be flat|bullseye");
  if (o.prefilter == "sobel")
    cfg.prefilter = nbed::Prefilter::sobel;
  else if (o.prefilter == "none")
    cfg.prefilter = nbed::Prefilter::none;
  else
    fail(Errc::invalid_argument, "prefilter must be none|sobel");

  if (!o.reference_disk_file.empty()) {
    const VideoStack ref_stack = read_stack(o.reference_disk_file);
    cfg.reference_disk_image = ref_stack.frame(0);
  }
  for (const auto& g : o.gvecs) {
    if (g.size() != 2) fail(Errc::invalid_argument, "gvecs entries are [x, y]");
    cfg.reference_gvecs.push_back({g[0], g[1]});
  }
  if (cfg.reference_gvecs.empty()) {
    if (o.reference.rfind("point:", 0) != 0)
      fail(Errc::invalid_argument, "reference must be 'point:p,q' or gvecs must be given");
    int p = 0, q = 0;
    if (std::sscanf(o.reference.c_str() + 6, "%d,%d", &p, &q) != 2)
      fail(Errc::invalid_argument, "reference point syntax is point:p,q");
    cfg.reference_point = {{p, q}};
  }

  const nbed::DeformationField field = nbed::strain_map(grid, cfg);

  // per-scan-point table
  std::vector<double> ps, qs, ok, f11, f12, f21, f22, exx, eyy, exy, rot;
  for (int p = 0; p < field.scan_p; ++p) {
    for (int q = 0; q < field.scan_q; ++q) {
      const std::size_t i = field.index(p, q);
      ps.push_back(p);
      qs.push_back(q);
      ok.push_back(field.ok[i]);
      f11.push_back(field.f[i].a11);
      f12.push_back(field.f[i].a12);
      f21.push_back(field.f[i].a21);
      f22.push_back(field.f[i].a22);
      exx.push_back(field.strain[i].a11);
      eyy.push_back(field.strain[i].a22);
      exy.push_back(field.strain[i].a12);
      rot.push_back(field.rotation_deg[i]);
    }
  }
  const CsvColumn cols[] = {{"p", ps},     {"q", qs},     {"ok", ok},   {"f11", f11},
                            {"f12", f12},  {"f21", f21},  {"f22", f22}, {"exx", exx},
                            {"eyy", eyy},  {"exy", exy},  {"rotation_deg", rot}};
  export_csv(cols, dir / "strain.csv");

  // component heatmaps
  auto component_image = [&](auto getter) {
    Image img(field.scan_p, field.scan_q, 0.0);
    for (int p = 0; p < field.scan_p; ++p)
      for (int q = 0; q < field.scan_q; ++q) img(p, q) = getter(field.index(p, q));
    return img;
  };
  export_heatmap(component_image([&](std::size_t i) { return field.strain[i].a11; }),
                 dir / "exx.pgm");
  export_heatmap(component_image([&](std::size_t i) { return field.strain[i].a22; }),
                 dir / "eyy.pgm");
  export_heatmap(component_image([&](std::size_t i) { return field.strain[i].a12; }),
                 dir / "exy.pgm");
  export_heatmap(component_image([&](std::size_t i) { return field.rotation_deg[i]; }),
                 dir / "rotation.pgm");

  ordered_json report;
  report["total_points"] = field.scan_p * field.scan_q;
  report["failed_points"] = field.failures.size();
  ordered_json failures = ordered_json::array();
  for (const auto& [index, reason] : field.failures) {
    ordered_json f;
    f["p"] = index / field.scan_q;
    f["q"] = index % field.scan_q;
    f["reason"] = reason;
    failures.push_back(f);
  }
  report["failures"] = failures;
  std::ofstream rf(dir / "failures.json", std::ios::binary | std::ios::trunc);
  rf << report.dump(2) << '\n';

  write_sidecar(dir / "nbed", to_json(o));
}

}  // namespace temsig::tools
