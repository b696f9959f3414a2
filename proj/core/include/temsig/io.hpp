#ifndef TEMSIG_IO_HPP
#define TEMSIG_IO_HPP

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "temsig/types.hpp"

namespace temsig {

/// TVS container: one-line UTF-8 JSON header terminated by '\n', then raw
/// little-endian 32-bit floats in (t, row, column) order. Round-trips are
/// bit-exact.
VideoStack read_stack(const std::filesystem::path& path);
void write_stack(const VideoStack& stack, const std::filesystem::path& path);

/// Diffraction grids travel in the same container with T = P*Q and header
/// keys "scan_p"/"scan_q".
DiffractionGrid read_grid(const std::filesystem::path& path);
void write_grid(const DiffractionGrid& grid, const std::filesystem::path& path);

/// Returns the raw header line without reading the payload.
std::string read_header_line(const std::filesystem::path& path);

struct HeatmapScale {
  std::optional<double> min;  // both unset -> auto scale from data
  std::optional<double> max;
};

/// 8-bit binary PGM (P5), linear map of [min,max] -> [0,255] with
/// round-half-up. A degenerate range emits a uniform 0 image and warns.
void export_heatmap(const Image& image, const std::filesystem::path& path,
                    HeatmapScale scale = {});

struct CsvColumn {
  std::string label;
  std::vector<double> values;
};

/// Comma-separated, '\n' line ends, mandatory header row, values rendered
/// with 9 significant digits.
void export_csv(std::span<const CsvColumn> columns, const std::filesystem::path& path);

/// Rectangular numeric matrix with a header row (signal matrices, per-t
/// statistics). Readers skip the header.
void write_csv_matrix(const std::vector<std::vector<double>>& rows,
                      const std::vector<std::string>& header,
                      const std::filesystem::path& path);
std::vector<std::vector<double>> read_csv_matrix(const std::filesystem::path& path);

/// 9-significant-digit decimal rendering used by every CSV writer.
std::string format_csv_value(double v);

}  // namespace temsig

#endif
