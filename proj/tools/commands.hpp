#ifndef TEMSIG_TOOLS_COMMANDS_HPP
#define TEMSIG_TOOLS_COMMANDS_HPP

#include <filesystem>

#include "options.hpp"

namespace temsig::tools {

// Each command validates its options, runs, writes its artifacts and the
// resolved-config sidecar. Errors are reported by throwing temsig::Error.
void cmd_convert(const ConvertOptions& o);
void cmd_synth(const SynthOptions& o);
void cmd_denoise(const DenoiseOptions& o);
void cmd_segment(const SegmentOptions& o);
void cmd_polar(const PolarOptions& o);
void cmd_detect(const DetectOptions& o);
void cmd_nbed(const NbedOptions& o);
void cmd_pipeline(const PipelineOptions& o);

// sidecar path: <primary output>.config.json (outputs may be files or dirs)
void write_sidecar(const std::filesystem::path& primary_output, const ordered_json& config);

}  // namespace temsig::tools

#endif
