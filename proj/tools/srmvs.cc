// srmvs: super-resolution + multi-view stereo pipeline driver.
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "srmvs/dataset_io.h"
#include "srmvs/errors.h"
#include "srmvs/evaluation.h"
#include "srmvs/pipeline.h"
#include "srmvs/synth.h"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitStage = 3;

// Raised for bad flag values so they map to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string scale;
  std::string textureless;
  std::string external_dir;
  std::string out;
};

void AddCommon(CLI::App* cmd, CommonOptions& o, bool with_external) {
  cmd->add_option("--config", o.config, "Config file (key = value lines)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", o.seed, "Run seed")->check(CLI::NonNegativeNumber);
  cmd->add_option("--jobs", o.jobs, "Depth-estimation workers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--scale", o.scale, "Scale factor k (e.g. 2, 1/2)");
  cmd->add_option("--textureless", o.textureless, "Textureless handling")
      ->check(CLI::IsMember({"auto", "on", "off"}));
  if (with_external) {
    cmd->add_option("--external-dir", o.external_dir,
                    "Externally super-resolved images (<view>.pgm|ppm)");
  }
  cmd->add_option("--out", o.out, "Output directory");
}

srmvs::PipelineConfig ResolveConfig(const CommonOptions& o) {
  srmvs::PipelineConfig cfg;
  try {
    if (!o.config.empty()) {
      cfg = srmvs::ParseConfig(srmvs::ReadTextFile(o.config));
    }
    if (o.seed) cfg.rng_seed = *o.seed;
    if (o.jobs) cfg.jobs = *o.jobs;
    if (!o.scale.empty()) cfg.scale = srmvs::ScaleSpec::Parse(o.scale);
    if (!o.textureless.empty()) {
      cfg.textureless = srmvs::ParseTexturelessMode(o.textureless);
    }
    if (!o.out.empty()) cfg.output_dir = o.out;
    cfg.Validate();
  } catch (const srmvs::ValidationError& e) {
    std::string msg = "invalid configuration:";
    for (const auto& v : e.Violations()) msg += "\n  " + v;
    throw UsageError(msg);
  } catch (const srmvs::InvalidArgumentError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

void PrintWarnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

int CmdSr(const std::string& input, const CommonOptions& o) {
  const srmvs::PipelineConfig cfg = ResolveConfig(o);
  srmvs::Dataset data = srmvs::LoadDataset(input);
  PrintWarnings(data.warnings);
  srmvs::SequenceSet out;
  if (o.external_dir.empty()) {
    out = srmvs::SuperResolveSet(data.set, cfg.scale);
  } else {
    std::vector<std::string> warnings;
    out = srmvs::IngestExternalSr(data.set, o.external_dir, cfg.scale,
                                  &warnings);
    PrintWarnings(warnings);
  }
  srmvs::SaveDataset(out, cfg.output_dir,
                     data.gt_cloud ? &*data.gt_cloud : nullptr);
  std::cout << "wrote " << srmvs::ToString(out.label) << " set ("
            << out.views.size() << " views) to " << cfg.output_dir << "\n";
  return kExitOk;
}

int CmdReconstruct(const std::string& input, const CommonOptions& o) {
  const srmvs::PipelineConfig cfg = ResolveConfig(o);
  srmvs::Dataset data = srmvs::LoadDataset(input);
  PrintWarnings(data.warnings);
  const bool textureless = srmvs::IsTextureless(data.set, cfg);
  srmvs::StageTimer timer;
  const srmvs::Reconstruction rec =
      srmvs::Reconstruct(data.set, cfg, textureless, &timer);

  const fs::path out = cfg.output_dir;
  srmvs::WritePly(rec.cloud, out / "fused.ply");
  for (std::size_t i = 0; i < rec.maps.size(); ++i) {
    srmvs::WriteDepthMap(rec.maps[i],
                         out / "depth" / (rec.views[i].name + ".dmap"));
  }
  srmvs::WriteTextFile(out / "config.txt", srmvs::SerializeConfig(cfg));

  std::cout << "textureless: " << (textureless ? "yes" : "no") << "\n"
            << "points: " << rec.cloud.Size() << "\n";
  for (const auto& [stage, seconds] : timer.seconds) {
    std::fprintf(stdout, "  %-12s %8.2f s\n", stage.c_str(), seconds);
  }
  return kExitOk;
}

int CmdEvaluate(const std::string& rec_path, const std::string& gt_path,
                const std::string& tolerances, const CommonOptions& o) {
  srmvs::PipelineConfig cfg = ResolveConfig(o);
  if (!tolerances.empty()) {
    try {
      cfg = srmvs::ParseConfig("tolerances_cm = " + tolerances, cfg);
      cfg.Validate();
    } catch (const std::exception& e) {
      throw UsageError(std::string("--tolerances: ") + e.what());
    }
  }
  const srmvs::PointCloud rec = srmvs::ReadPly(rec_path);
  const srmvs::PointCloud gt = srmvs::ReadPly(gt_path);
  srmvs::ScoreTable table =
      srmvs::Evaluate(rec, gt, srmvs::CmToMeters(cfg.tolerances_cm));
  table.scene = fs::path(gt_path).stem().string();
  table.model = fs::path(rec_path).stem().string();

  std::cout << srmvs::FormatTextTable({table});
  const std::string csv = srmvs::FormatCsv(table);
  if (o.out.empty()) {
    std::cout << "\n" << csv;
  } else {
    srmvs::WriteTextFile(fs::path(o.out) / "scores.csv", csv);
  }
  return kExitOk;
}

int CmdExperiment(const std::string& input, const std::string& hr_dir,
                  const CommonOptions& o) {
  const srmvs::PipelineConfig cfg = ResolveConfig(o);
  srmvs::ExperimentInputs inputs;
  if (fs::is_directory(input)) {
    srmvs::Dataset data = srmvs::LoadDataset(input);
    PrintWarnings(data.warnings);
    if (!data.gt_cloud) {
      throw srmvs::NotFoundError(input + ": experiment needs gt/cloud.ply");
    }
    inputs.scene = fs::path(input).filename().string();
    inputs.lr = std::move(data.set);
    inputs.gt = std::move(*data.gt_cloud);
    if (!hr_dir.empty()) {
      srmvs::Dataset hr = srmvs::LoadDataset(hr_dir);
      PrintWarnings(hr.warnings);
      hr.set.label = srmvs::SetLabel::kHR;
      inputs.hr = std::move(hr.set);
    }
  } else {
    srmvs::SceneSpec spec;
    try {
      spec = srmvs::StandardScene(input);
    } catch (const srmvs::NotFoundError&) {
      throw UsageError("'" + input +
                       "' is neither a dataset directory nor a standard scene");
    }
    try {
      inputs = srmvs::ExperimentFromScene(spec, cfg);
    } catch (const srmvs::InvalidArgumentError& e) {
      throw UsageError(e.what());
    }
  }

  std::optional<fs::path> external;
  if (!o.external_dir.empty()) external = o.external_dir;
  const srmvs::ExperimentReport report =
      srmvs::RunExperiment(inputs, cfg, external);
  srmvs::WriteExperimentReport(report, cfg.output_dir);
  srmvs::WriteTextFile(fs::path(cfg.output_dir) / "config.txt",
                       srmvs::SerializeConfig(cfg));
  std::cout << srmvs::FormatExperimentReport(report);
  return kExitOk;
}

int CmdSynth(const std::string& scene, bool list, const CommonOptions& o) {
  if (list) {
    for (const auto& spec : srmvs::StandardScenes()) {
      std::cout << spec.name << (spec.textured ? "" : "  (textureless)")
                << "\n";
    }
    std::cout << "plane\n";
    return kExitOk;
  }
  if (scene.empty()) throw UsageError("synth: a scene name is required");
  const srmvs::PipelineConfig cfg = ResolveConfig(o);
  srmvs::SceneSpec spec;
  try {
    spec = scene == "plane" ? srmvs::PlaneScene() : srmvs::StandardScene(scene);
  } catch (const srmvs::NotFoundError& e) {
    throw UsageError(e.what());
  }
  if (cfg.scale.denominator != 1) {
    throw UsageError("synth: --scale must be an integer");
  }
  const srmvs::LrHrPair pair = srmvs::MakeLrHrPair(spec, cfg.scale.numerator);
  const fs::path out = cfg.output_dir;
  srmvs::SaveDataset(pair.hr, out / "hr", &pair.gt.cloud, &pair.gt.depth_maps);
  srmvs::SaveDataset(pair.lr, out / "lr", &pair.gt.cloud);
  std::cout << "wrote " << out / "hr" << " and " << out / "lr" << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Super-resolution assisted multi-view stereo"};
  app.require_subcommand(1);

  CommonOptions o;
  std::string input;
  std::string gt_path;
  std::string hr_dir;
  std::string tolerances;
  bool list = false;

  auto* sr = app.add_subcommand("sr", "Super-resolve a dataset (bicubic or external)");
  sr->add_option("dataset", input, "Input dataset directory")->required();
  AddCommon(sr, o, true);

  auto* reconstruct =
      app.add_subcommand("reconstruct", "Depth maps and fused cloud for a dataset");
  reconstruct->add_option("dataset", input, "Input dataset directory")->required();
  AddCommon(reconstruct, o, false);

  auto* evaluate = app.add_subcommand("evaluate", "Score a cloud against ground truth");
  evaluate->add_option("reconstruction", input, "Reconstructed PLY")->required();
  evaluate->add_option("ground_truth", gt_path, "Ground-truth PLY")->required();
  evaluate->add_option("--tolerances", tolerances,
                       "Comma-separated tolerances in cm");
  AddCommon(evaluate, o, false);

  auto* experiment =
      app.add_subcommand("experiment", "LR / BC / EXT / HR comparison");
  experiment->add_option("input", input, "Standard scene name or LR dataset")
      ->required();
  experiment->add_option("--hr", hr_dir, "HR dataset (dataset input only)");
  AddCommon(experiment, o, true);

  auto* synth = app.add_subcommand("synth", "Render a synthetic scene to hr/ and lr/");
  synth->add_option("scene", input, "Scene name");
  synth->add_flag("--list", list, "List scene names");
  AddCommon(synth, o, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*sr) return CmdSr(input, o);
    if (*reconstruct) return CmdReconstruct(input, o);
    if (*evaluate) return CmdEvaluate(input, gt_path, tolerances, o);
    if (*experiment) return CmdExperiment(input, hr_dir, o);
    if (*synth) return CmdSynth(input, list, o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const srmvs::StageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  } catch (const srmvs::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const srmvs::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const srmvs::NotFoundError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const srmvs::InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitStage;
  }
  return kExitUsage;
}
