#include "temsig/io.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "temsig/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "TVS payload writer assumes a little-endian host");
static_assert(sizeof(float) == 4, "TVS payload is 32-bit IEEE floats");

namespace temsig {

namespace {

using ordered_json = nlohmann::ordered_json;

void check_payload_finite(std::span<const float> payload) {
  for (float v : payload)
    if (!std::isfinite(v)) fail(Errc::non_finite_data, "payload contains NaN or Inf");
}

struct TvsHeader {
  int frames = 0, rows = 0, cols = 0;
  std::optional<double> frame_interval;
  std::optional<double> pixel_size;
  std::optional<int> scan_p, scan_q;
};

TvsHeader parse_header(const std::string& line, const std::filesystem::path& path) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object())
    fail(Errc::malformed_header, "not a JSON object: " + path.string());
  if (!j.contains("tvs") || !j["tvs"].is_number_integer() || j["tvs"].get<int>() != 1)
    fail(Errc::malformed_header, "missing or unsupported tvs version");
  TvsHeader h;
  for (const char* key : {"T", "M", "N"}) {
    if (!j.contains(key) || !j[key].is_number_integer())
      fail(Errc::malformed_header, std::string("missing integer key ") + key);
  }
  h.frames = j["T"].get<int>();
  h.rows = j["M"].get<int>();
  h.cols = j["N"].get<int>();
  if (h.frames < 1 || h.rows < 1 || h.cols < 1)
    fail(Errc::malformed_header, "dimensions must be >= 1");
  if (j.contains("frame_interval") && !j["frame_interval"].is_null()) {
    h.frame_interval = j["frame_interval"].get<double>();
    if (*h.frame_interval <= 0.0) fail(Errc::malformed_header, "frame_interval must be > 0");
  }
  if (j.contains("pixel_size") && !j["pixel_size"].is_null())
    h.pixel_size = j["pixel_size"].get<double>();
  if (j.contains("scan_p")) h.scan_p = j["scan_p"].get<int>();
  if (j.contains("scan_q")) h.scan_q = j["scan_q"].get<int>();
  return h;
}

std::pair<TvsHeader, std::vector<float>> read_tvs(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(Errc::malformed_header, "missing header line");
  const TvsHeader h = parse_header(line, path);

  const std::size_t count =
      static_cast<std::size_t>(h.frames) * h.rows * h.cols;
  std::vector<float> payload(count);
  in.read(reinterpret_cast<char*>(payload.data()),
          static_cast<std::streamsize>(count * sizeof(float)));
  if (static_cast<std::size_t>(in.gcount()) != count * sizeof(float))
    fail(Errc::dimension_mismatch, "payload shorter than 4*T*M*N bytes");
  char extra;
  if (in.read(&extra, 1); in.gcount() != 0)
    fail(Errc::dimension_mismatch, "payload longer than 4*T*M*N bytes");
  check_payload_finite(payload);
  return {h, std::move(payload)};
}

void write_tvs(const ordered_json& header, std::span<const float> payload,
               const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
  out << header.dump() << '\n';
  out.write(reinterpret_cast<const char*>(payload.data()),
            static_cast<std::streamsize>(payload.size() * sizeof(float)));
  if (!out) fail(Errc::io_failure, "write failed: " + path.string());
}

ordered_json base_header(int frames, int rows, int cols, std::optional<double> frame_interval,
                         std::optional<double> pixel_size) {
  ordered_json j;
  j["tvs"] = 1;
  j["T"] = frames;
  j["M"] = rows;
  j["N"] = cols;
  if (frame_interval)
    j["frame_interval"] = *frame_interval;
  else
    j["frame_interval"] = nullptr;
  if (pixel_size)
    j["pixel_size"] = *pixel_size;
  else
    j["pixel_size"] = nullptr;
  return j;
}

}  // namespace

VideoStack read_stack(const std::filesystem::path& path) {
  auto [h, payload] = read_tvs(path);
  VideoStack s;
  s.frames = h.frames;
  s.rows = h.rows;
  s.cols = h.cols;
  s.frame_interval = h.frame_interval;
  s.pixel_size = h.pixel_size;
  s.data = std::move(payload);
  return s;
}

void write_stack(const VideoStack& stack, const std::filesystem::path& path) {
  stack.validate();
  write_tvs(base_header(stack.frames, stack.rows, stack.cols, stack.frame_interval,
                        stack.pixel_size),
            stack.data, path);
}

DiffractionGrid read_grid(const std::filesystem::path& path) {
  auto [h, payload] = read_tvs(path);
  if (!h.scan_p || !h.scan_q)
    fail(Errc::malformed_header, "grid file lacks scan_p/scan_q keys");
  if (*h.scan_p < 1 || *h.scan_q < 1 || *h.scan_p * *h.scan_q != h.frames)
    fail(Errc::malformed_header, "scan_p*scan_q must equal T");
  DiffractionGrid g;
  g.scan_p = *h.scan_p;
  g.scan_q = *h.scan_q;
  g.rows = h.rows;
  g.cols = h.cols;
  g.scan_step = h.pixel_size;
  g.data = std::move(payload);
  g.validate();
  return g;
}

void write_grid(const DiffractionGrid& grid, const std::filesystem::path& path) {
  grid.validate();
  ordered_json j = base_header(grid.scan_p * grid.scan_q, grid.rows, grid.cols, std::nullopt,
                               grid.scan_step);
  j["scan_p"] = grid.scan_p;
  j["scan_q"] = grid.scan_q;
  write_tvs(j, grid.data, path);
}

std::string read_header_line(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::io_failure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(Errc::malformed_header, "missing header line");
  return line;
}

void export_heatmap(const Image& image, const std::filesystem::path& path, HeatmapScale scale) {
  if (!image.all_finite()) fail(Errc::non_finite_data, "heatmap input contains NaN or Inf");
  if (image.size() == 0) fail(Errc::empty_input, "heatmap input is empty");
  const double lo = scale.min ? *scale.min : image.min();
  const double hi = scale.max ? *scale.max : image.max();

  std::vector<unsigned char> pixels(image.size(), 0);
  if (hi <= lo) {
    warn("heatmap scale range is degenerate (min == max); emitting uniform 0 image");
  } else {
    const double span = hi - lo;
    for (std::size_t i = 0; i < image.size(); ++i) {
      double v = (image.data()[i] - lo) / span * 255.0;
      v = std::floor(v + 0.5);  // round half up
      if (v < 0.0) v = 0.0;
      if (v > 255.0) v = 255.0;
      pixels[i] = static_cast<unsigned char>(v);
    }
  }

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
  out << "P5\n" << image.cols() << ' ' << image.rows() << "\n255\n";
  out.write(reinterpret_cast<const char*>(pixels.data()),
            static_cast<std::streamsize>(pixels.size()));
  if (!out) fail(Errc::io_failure, "write failed: " + path.string());
}

std::string format_csv_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%#.9g", v);
  return buf;
}

void export_csv(std::span<const CsvColumn> columns, const std::filesystem::path& path) {
  std::size_t length = columns.empty() ? 0 : columns.front().values.size();
  for (const auto& col : columns)
    if (col.values.size() != length)
      fail(Errc::ragged_columns, "column " + col.label + " has mismatched length");

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out << ',';
    out << columns[c].label;
  }
  out << '\n';
  for (std::size_t r = 0; r < length; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (c) out << ',';
      out << format_csv_value(columns[c].values[r]);
    }
    out << '\n';
  }
  if (!out) fail(Errc::io_failure, "write failed: " + path.string());
}

void write_csv_matrix(const std::vector<std::vector<double>>& rows,
                      const std::vector<std::string>& header,
                      const std::filesystem::path& path) {
  for (const auto& row : rows)
    if (row.size() != header.size())
      fail(Errc::ragged_columns, "matrix row width does not match header");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::io_failure, "cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c) out << ',';
    out << header[c];
  }
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_csv_value(row[c]);
    }
    out << '\n';
  }
  if (!out) fail(Errc::io_failure, "write failed: " + path.string());
}

std::vector<std::vector<double>> read_csv_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::io_failure, "cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line)) fail(Errc::empty_input, "missing CSV header: " + path.string());
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        fail(Errc::malformed_header, "non-numeric CSV cell '" + cell + "'");
      }
    }
    if (width == 0) width = row.size();
    if (row.size() != width) fail(Errc::ragged_columns, "ragged CSV row");
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace temsig
