#ifndef TEMSIG_ERRORS_HPP
#define TEMSIG_ERRORS_HPP

#include <functional>
#include <stdexcept>
#include <string>

namespace temsig {

enum class Errc {
  malformed_header,
  dimension_mismatch,
  non_finite_data,
  io_failure,
  ragged_columns,
  too_few_points,
  singular_system,
  length_mismatch,
  too_few_frames,
  empty_input,
  no_edges,
  center_outside_image,
  band_outside_range,
  support_too_large,
  spot_outside_image,
  disk_outside_image,
  radius_too_large,
  too_few_peaks,
  degenerate_geometry,
  non_positive_determinant,
  calibration_diverged,
  stage_type_mismatch,
  invalid_argument,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

/// Non-fatal diagnostics (degenerate heatmap range, Monte Carlo censoring, ...).
/// The default handler writes to stderr; tests and the CLI may swap it.
using WarningHandler = std::function<void(const std::string&)>;
WarningHandler set_warning_handler(WarningHandler handler);
void warn(const std::string& message);

}  // namespace temsig

#endif
