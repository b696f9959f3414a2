// pipeline: type-checked stage chaining with automatic artifact paths.
#include <string>
#include <vector>

#include "commands.hpp"
#include "temsig/errors.hpp"

namespace temsig::tools {

namespace fs = std::filesystem;

namespace {

enum class Artifact { none, stack, grid, matrix, labels, result, field };

Artifact synth_output(const std::string& kind) {
  if (kind == "corrosion_video" || kind == "ring_pattern" || kind == "disk_pair")
    return Artifact::stack;
  if (kind == "nbed_grid") return Artifact::grid;
  if (kind == "sparse_stream") return Artifact::matrix;
  fail(Errc::stage_type_mismatch, "unknown synth kind '" + kind + "'");
}

struct StagePlan {
  std::string name;
  Artifact input = Artifact::none;
  Artifact output = Artifact::none;
  std::string output_path;  // relative to out_dir
};

std::string extension_for(Artifact a) {
  switch (a) {
    case Artifact::stack:
    case Artifact::grid:
    case Artifact::labels:
      return ".tvs";
    case Artifact::matrix:
      return ".csv";
    default:
      return "";
  }
}

}  // namespace

void cmd_pipeline(const PipelineOptions& o) {
  if (o.out_dir.empty()) fail(Errc::invalid_argument, "pipeline: 'out_dir' is required");
  if (!o.stages.is_array() || o.stages.empty())
    fail(Errc::invalid_argument, "pipeline: 'stages' must be a non-empty array");

  // validation pass: resolve every stage's type signature before running
  std::vector<StagePlan> plans;
  Artifact current = Artifact::none;
  for (std::size_t i = 0; i < o.stages.size(); ++i) {
    const auto& stage_json = o.stages[i];
    if (!stage_json.is_object() || !stage_json.contains("stage"))
      fail(Errc::invalid_argument, "pipeline: each stage needs a 'stage' key");
    StagePlan plan;
    plan.name = stage_json.at("stage").get<std::string>();

    if (plan.name == "synth") {
      plan.input = Artifact::none;
      plan.output = synth_output(stage_json.value("kind", std::string("corrosion_video")));
    } else if (plan.name == "denoise") {
      plan.input = Artifact::stack;
      plan.output = Artifact::stack;
    } else if (plan.name == "segment") {
      plan.input = Artifact::stack;
      plan.output = Artifact::labels;
    } else if (plan.name == "polar") {
      plan.input = Artifact::stack;
      plan.output = Artifact::matrix;
    } else if (plan.name == "detect") {
      plan.input = Artifact::matrix;
      plan.output = Artifact::result;
    } else if (plan.name == "nbed") {
      plan.input = Artifact::grid;
      plan.output = Artifact::field;
    } else {
      fail(Errc::stage_type_mismatch, "unknown stage '" + plan.name + "'");
    }

    if (i == 0 && plan.input != Artifact::none)
      fail(Errc::stage_type_mismatch, "first stage '" + plan.name + "' needs an input");
    if (i > 0 && plan.input != current)
      fail(Errc::stage_type_mismatch,
           "stage '" + plan.name + "' cannot consume the previous stage's output");

    const std::string index = (i < 10 ? "0" : "") + std::to_string(i);
    plan.output_path = index + "_" + plan.name + extension_for(plan.output);
    current = plan.output;
    plans.push_back(plan);
  }

  fs::create_directories(o.out_dir);
  const fs::path dir = o.out_dir;

  // execution pass; a failing stage stops the chain, earlier outputs remain
  std::string previous_output;
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto& plan = plans[i];
    nlohmann::json stage_json = o.stages[i];
    stage_json.erase("stage");
    const std::uint64_t stage_seed = o.seed + i;

    if (plan.name == "synth") {
      SynthOptions so;
      so.seed = stage_seed;
      apply_json(so, stage_json);
      so.out = (dir / plan.output_path).string();
      cmd_synth(so);
      previous_output = so.out;
    } else if (plan.name == "denoise") {
      DenoiseOptions dn;
      apply_json(dn, stage_json);
      dn.in = previous_output;
      dn.out = (dir / plan.output_path).string();
      cmd_denoise(dn);
      previous_output = dn.out;
    } else if (plan.name == "segment") {
      SegmentOptions sg;
      apply_json(sg, stage_json);
      sg.in = previous_output;
      sg.out_dir = (dir / (plan.output_path.substr(0, 2) + "_segment")).string();
      cmd_segment(sg);
      previous_output = (fs::path(sg.out_dir) / "labels.tvs").string();
    } else if (plan.name == "polar") {
      PolarOptions po;
      apply_json(po, stage_json);
      po.in = previous_output;
      po.out_dir = (dir / (plan.output_path.substr(0, 2) + "_polar")).string();
      cmd_polar(po);
      previous_output = (fs::path(po.out_dir) / "signals.csv").string();
    } else if (plan.name == "detect") {
      DetectOptions de;
      de.seed = stage_seed;
      apply_json(de, stage_json);
      de.in = previous_output;
      de.out_dir = (dir / (plan.output_path.substr(0, 2) + "_detect")).string();
      cmd_detect(de);
      previous_output = (fs::path(de.out_dir) / "stop_result.json").string();
    } else if (plan.name == "nbed") {
      NbedOptions nb;
      apply_json(nb, stage_json);
      nb.in = previous_output;
      nb.out_dir = (dir / (plan.output_path.substr(0, 2) + "_nbed")).string();
      cmd_nbed(nb);
      previous_output = (fs::path(nb.out_dir) / "strain.csv").string();
    }
  }

  write_sidecar(dir / "pipeline", to_json(o));
}

}  // namespace temsig::tools
