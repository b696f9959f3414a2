#include "temsig/errors.hpp"

#include <cstdio>
#include <mutex>
#include <utility>

namespace temsig {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::malformed_header: return "MalformedHeader";
    case Errc::dimension_mismatch: return "DimensionMismatch";
    case Errc::non_finite_data: return "NonFiniteData";
    case Errc::io_failure: return "IoFailure";
    case Errc::ragged_columns: return "RaggedColumns";
    case Errc::too_few_points: return "TooFewPoints";
    case Errc::singular_system: return "SingularSystem";
    case Errc::length_mismatch: return "LengthMismatch";
    case Errc::too_few_frames: return "TooFewFrames";
    case Errc::empty_input: return "EmptyInput";
    case Errc::no_edges: return "NoEdges";
    case Errc::center_outside_image: return "CenterOutsideImage";
    case Errc::band_outside_range: return "BandOutsideRange";
    case Errc::support_too_large: return "SupportTooLarge";
    case Errc::spot_outside_image: return "SpotOutsideImage";
    case Errc::disk_outside_image: return "DiskOutsideImage";
    case Errc::radius_too_large: return "RadiusTooLarge";
    case Errc::too_few_peaks: return "TooFewPeaks";
    case Errc::degenerate_geometry: return "DegenerateGeometry";
    case Errc::non_positive_determinant: return "NonPositiveDeterminant";
    case Errc::calibration_diverged: return "CalibrationDiverged";
    case Errc::stage_type_mismatch: return "StageTypeMismatch";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

namespace {

std::mutex g_warning_mutex;
WarningHandler g_warning_handler;

}  // namespace

WarningHandler set_warning_handler(WarningHandler handler) {
  std::lock_guard<std::mutex> lock(g_warning_mutex);
  WarningHandler previous = std::move(g_warning_handler);
  g_warning_handler = std::move(handler);
  return previous;
}

void warn(const std::string& message) {
  WarningHandler handler;
  {
    std::lock_guard<std::mutex> lock(g_warning_mutex);
    handler = g_warning_handler;
  }
  if (handler) {
    handler(message);
  } else {
    std::fprintf(stderr, "temsig: warning: %s\n", message.c_str());
  }
}

}  // namespace temsig
