#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srmvs/depth_filter.h"
#include "srmvs/evaluation.h"
#include "srmvs/fusion.h"
#include "srmvs/patch_match.h"
#include "srmvs/sisr.h"
#include "srmvs/synth.h"

namespace srmvs {

enum class TexturelessMode { kAuto, kOn, kOff };

const char* ToString(TexturelessMode mode);
TexturelessMode ParseTexturelessMode(const std::string& text);

struct PipelineConfig {
  ScaleSpec scale{2, 1};
  PatchMatchConfig patchmatch;
  SpeckleConfig speckle;
  FusionConfig fusion;
  std::vector<double> tolerances_cm = DefaultTolerancesCm();
  TexturelessMode textureless = TexturelessMode::kAuto;
  // Mean 5x5 local intensity variance below which a set is textureless.
  double textureless_threshold = 2.5e-3;
  // Replace patchmatch depth bounds by the scene's own when the input is a
  // synthetic scene.
  bool depth_range_from_scene = true;
  std::string output_dir = "out";
  std::uint64_t rng_seed = 0;
  int jobs = 1;

  void Validate() const;

  friend bool operator==(const PipelineConfig&,
                         const PipelineConfig&) = default;
};

// Flat `key = value` lines, `#` comments, dotted keys for nested sections.
// Unknown keys and malformed values throw InvalidArgumentError naming the
// line. Keys not present keep the values already in `base`.
PipelineConfig ParseConfig(const std::string& text,
                           const PipelineConfig& base = {});
std::string SerializeConfig(const PipelineConfig& cfg);

// Mean over images of the mean 5x5 windowed gray-level variance.
double MeanLocalVariance(const SequenceSet& set);
bool IsTextureless(const SequenceSet& set, const PipelineConfig& cfg);

struct StageTimer {
  std::map<std::string, double> seconds;
  void Add(const std::string& stage, double s) { seconds[stage] += s; }
};

struct Reconstruction {
  std::vector<View> views;  // undistorted
  std::vector<DepthMap> raw_maps;
  std::vector<DepthMap> maps;  // after optional speckle filtering
  PointCloud cloud;
  bool textureless = false;
};

// undistort -> PatchMatch per view -> speckle filter (textureless only) ->
// fuse. Stage failures are rethrown as StageError.
Reconstruction Reconstruct(const SequenceSet& set, const PipelineConfig& cfg,
                           bool textureless, StageTimer* timer = nullptr);

// Runs the views on cfg.jobs workers; output order follows `set`.
std::vector<DepthMap> EstimateAllDepthMaps(const std::vector<View>& views,
                                           const PipelineConfig& cfg,
                                           bool textureless);

struct ArmResult {
  SetLabel label = SetLabel::kLR;
  ScoreTable scores;
  bool textureless = false;
  std::size_t points = 0;
  StageTimer timer;
  PointCloud cloud;
};

struct ExperimentReport {
  std::string scene;
  std::vector<ArmResult> arms;
  // (variant label, improvement over LR)
  std::vector<std::pair<SetLabel, ImprovementReport>> deltas;

  const ArmResult* Arm(SetLabel label) const;
};

struct ExperimentInputs {
  std::string scene;
  SequenceSet lr;
  std::optional<SequenceSet> hr;
  PointCloud gt;
  // Depth bounds derived from the scene geometry, if known.
  std::optional<std::pair<double, double>> depth_range;
};

ExperimentInputs ExperimentFromScene(const SceneSpec& spec,
                                     const PipelineConfig& cfg);

// LR, BC = bicubic(LR, k), optional EXT from `external_dir`, optional HR.
ExperimentReport RunExperiment(
    const ExperimentInputs& inputs, const PipelineConfig& cfg,
    const std::optional<std::filesystem::path>& external_dir = std::nullopt);

// Per-arm `<label>/fused.ply` and `<label>/scores.csv`, plus scores.csv
// (all arms), deltas.csv, and report.txt (tables and stage timings).
void WriteExperimentReport(const ExperimentReport& report,
                           const std::filesystem::path& dir);
std::string FormatExperimentReport(const ExperimentReport& report);

}  // namespace srmvs
