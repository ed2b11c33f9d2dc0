#include "srmvs/pipeline.h"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

#include "srmvs/dataset_io.h"
#include "srmvs/errors.h"

namespace srmvs {
namespace {

using Clock = std::chrono::steady_clock;

double SecondsSince(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string FormatDouble(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double ToDouble(const std::string& value) {
  double out = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size() ||
      !std::isfinite(out)) {
    throw InvalidArgumentError("expected a number, got '" + value + "'");
  }
  return out;
}

template <typename T = long long>
T ToInteger(const std::string& value) {
  T out = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw InvalidArgumentError("expected an integer, got '" + value + "'");
  }
  return out;
}

bool ToBool(const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw InvalidArgumentError("expected true or false, got '" + value + "'");
}

struct Field {
  std::string key;
  std::function<std::string(const PipelineConfig&)> get;
  std::function<void(PipelineConfig&, const std::string&)> set;
};

template <typename T>
Field DoubleField(std::string key, T PipelineConfig::*section, double T::*member) {
  return {std::move(key),
          [=](const PipelineConfig& c) { return FormatDouble(c.*section.*member); },
          [=](PipelineConfig& c, const std::string& v) {
            c.*section.*member = ToDouble(v);
          }};
}

template <typename T>
Field IntField(std::string key, T PipelineConfig::*section, int T::*member) {
  return {std::move(key),
          [=](const PipelineConfig& c) {
            return std::to_string(c.*section.*member);
          },
          [=](PipelineConfig& c, const std::string& v) {
            c.*section.*member = static_cast<int>(ToInteger(v));
          }};
}

const std::vector<Field>& Fields() {
  static const std::vector<Field> fields = [] {
    using P = PipelineConfig;
    std::vector<Field> f;
    f.push_back({"scale", [](const P& c) { return c.scale.ToString(); },
                 [](P& c, const std::string& v) { c.scale = ScaleSpec::Parse(v); }});
    f.push_back({"seed", [](const P& c) { return std::to_string(c.rng_seed); },
                 [](P& c, const std::string& v) {
                   if (!v.empty() && v[0] == '-') {
                     throw InvalidArgumentError("seed must be >= 0");
                   }
                   c.rng_seed = ToInteger<std::uint64_t>(v);
                 }});
    f.push_back({"jobs", [](const P& c) { return std::to_string(c.jobs); },
                 [](P& c, const std::string& v) {
                   c.jobs = static_cast<int>(ToInteger(v));
                 }});
    f.push_back({"textureless",
                 [](const P& c) { return std::string(ToString(c.textureless)); },
                 [](P& c, const std::string& v) {
                   c.textureless = ParseTexturelessMode(v);
                 }});
    f.push_back({"textureless_threshold",
                 [](const P& c) { return FormatDouble(c.textureless_threshold); },
                 [](P& c, const std::string& v) {
                   c.textureless_threshold = ToDouble(v);
                 }});
    f.push_back({"depth_range_from_scene",
                 [](const P& c) {
                   return std::string(c.depth_range_from_scene ? "true" : "false");
                 },
                 [](P& c, const std::string& v) {
                   c.depth_range_from_scene = ToBool(v);
                 }});
    f.push_back({"output_dir", [](const P& c) { return c.output_dir; },
                 [](P& c, const std::string& v) { c.output_dir = v; }});
    f.push_back({"tolerances_cm",
                 [](const P& c) {
                   std::string out;
                   for (double t : c.tolerances_cm) {
                     out += (out.empty() ? "" : ",") + FormatDouble(t);
                   }
                   return out;
                 },
                 [](P& c, const std::string& v) {
                   std::vector<double> values;
                   std::stringstream ss(v);
                   std::string item;
                   while (std::getline(ss, item, ',')) {
                     values.push_back(ToDouble(Trim(item)));
                   }
                   c.tolerances_cm = values;
                 }});

    f.push_back(IntField("patchmatch.window_radius", &P::patchmatch,
                         &PatchMatchConfig::window_radius));
    f.push_back(DoubleField("patchmatch.min_ncc", &P::patchmatch,
                            &PatchMatchConfig::min_ncc));
    f.push_back(IntField("patchmatch.iterations", &P::patchmatch,
                         &PatchMatchConfig::iterations));
    f.push_back(DoubleField("patchmatch.depth_min", &P::patchmatch,
                            &PatchMatchConfig::depth_min));
    f.push_back(DoubleField("patchmatch.depth_max", &P::patchmatch,
                            &PatchMatchConfig::depth_max));
    f.push_back(IntField("patchmatch.perturbation_halving", &P::patchmatch,
                         &PatchMatchConfig::perturbation_halving));
    f.push_back(IntField("patchmatch.source_views_per_pixel", &P::patchmatch,
                         &PatchMatchConfig::source_views_per_pixel));
    f.push_back(IntField("patchmatch.max_source_views", &P::patchmatch,
                         &PatchMatchConfig::max_source_views));
    f.push_back(DoubleField("patchmatch.min_baseline_deg", &P::patchmatch,
                            &PatchMatchConfig::min_baseline_deg));
    f.push_back(DoubleField("patchmatch.max_baseline_deg", &P::patchmatch,
                            &PatchMatchConfig::max_baseline_deg));
    f.push_back(DoubleField("patchmatch.sigma_color", &P::patchmatch,
                            &PatchMatchConfig::sigma_color));
    f.push_back(DoubleField("patchmatch.sigma_dist", &P::patchmatch,
                            &PatchMatchConfig::sigma_dist));

    f.push_back(DoubleField("speckle.max_depth_range", &P::speckle,
                            &SpeckleConfig::max_depth_range));
    f.push_back(DoubleField("speckle.max_speckle_fraction", &P::speckle,
                            &SpeckleConfig::max_speckle_fraction));

    f.push_back(IntField("fusion.min_consistent_views", &P::fusion,
                         &FusionConfig::min_consistent_views));
    f.push_back(DoubleField("fusion.max_reprojection_error", &P::fusion,
                            &FusionConfig::max_reprojection_error));
    f.push_back(DoubleField("fusion.max_relative_depth_diff", &P::fusion,
                            &FusionConfig::max_relative_depth_diff));
    f.push_back(DoubleField("fusion.max_normal_angle", &P::fusion,
                            &FusionConfig::max_normal_angle));
    return f;
  }();
  return fields;
}

std::uint64_t ViewSeed(std::uint64_t run_seed, std::size_t index) {
  std::uint64_t x = run_seed + 0x9E3779B97F4A7C15ULL * (index + 1);
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

template <typename Fn>
auto RunStage(const std::string& stage, StageTimer* timer, Fn&& fn) {
  const auto start = Clock::now();
  try {
    if constexpr (std::is_void_v<decltype(fn())>) {
      fn();
      if (timer) timer->Add(stage, SecondsSince(start));
    } else {
      auto result = fn();
      if (timer) timer->Add(stage, SecondsSince(start));
      return result;
    }
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(stage, e.what());
  }
}

}  // namespace

const char* ToString(TexturelessMode mode) {
  switch (mode) {
    case TexturelessMode::kAuto: return "auto";
    case TexturelessMode::kOn: return "on";
    case TexturelessMode::kOff: return "off";
  }
  return "?";
}

TexturelessMode ParseTexturelessMode(const std::string& text) {
  if (text == "auto") return TexturelessMode::kAuto;
  if (text == "on") return TexturelessMode::kOn;
  if (text == "off") return TexturelessMode::kOff;
  throw InvalidArgumentError("textureless mode must be auto, on or off; got '" +
                             text + "'");
}

void PipelineConfig::Validate() const {
  std::vector<std::string> violations;
  const auto collect = [&](auto&& check) {
    try {
      check();
    } catch (const ValidationError& e) {
      violations.insert(violations.end(), e.Violations().begin(),
                        e.Violations().end());
    }
  };
  collect([&] { patchmatch.Validate(); });
  collect([&] { speckle.Validate(); });
  collect([&] { fusion.Validate(); });
  if (jobs < 1) violations.push_back("jobs must be >= 1");
  if (tolerances_cm.empty()) violations.push_back("tolerances_cm is empty");
  for (std::size_t i = 0; i < tolerances_cm.size(); ++i) {
    if (!(tolerances_cm[i] > 0.0) ||
        (i > 0 && !(tolerances_cm[i] > tolerances_cm[i - 1]))) {
      violations.push_back(
          "tolerances_cm must be positive and strictly increasing");
      break;
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

PipelineConfig ParseConfig(const std::string& text, const PipelineConfig& base) {
  PipelineConfig cfg = base;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = "config line " + std::to_string(line_no) + ": ";
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgumentError(where + "expected 'key = value'");
    }
    const std::string key = Trim(line.substr(0, eq));
    const std::string value = Trim(line.substr(eq + 1));
    const auto& fields = Fields();
    const auto it = std::find_if(fields.begin(), fields.end(),
                                 [&](const Field& f) { return f.key == key; });
    if (it == fields.end()) {
      throw InvalidArgumentError(where + "unknown key '" + key + "'");
    }
    if (!seen.insert(key).second) {
      throw InvalidArgumentError(where + "duplicate key '" + key + "'");
    }
    try {
      it->set(cfg, value);
    } catch (const std::exception& e) {
      throw InvalidArgumentError(where + key + ": " + e.what());
    }
  }
  return cfg;
}

std::string SerializeConfig(const PipelineConfig& cfg) {
  std::string out;
  for (const Field& f : Fields()) out += f.key + " = " + f.get(cfg) + "\n";
  return out;
}

double MeanLocalVariance(const SequenceSet& set) {
  constexpr int kRadius = 2;
  double total = 0.0;
  std::size_t images = 0;
  for (const View& view : set.views) {
    const Image gray = view.image.ToGray();
    const int w = gray.Width();
    const int h = gray.Height();
    if (w <= 2 * kRadius || h <= 2 * kRadius) continue;
    double sum = 0.0;
    std::size_t count = 0;
    for (int y = kRadius; y < h - kRadius; ++y) {
      for (int x = kRadius; x < w - kRadius; ++x) {
        double s = 0.0;
        double s2 = 0.0;
        for (int dy = -kRadius; dy <= kRadius; ++dy) {
          for (int dx = -kRadius; dx <= kRadius; ++dx) {
            const double v = gray.At(x + dx, y + dy);
            s += v;
            s2 += v * v;
          }
        }
        constexpr double n = (2 * kRadius + 1) * (2 * kRadius + 1);
        sum += std::max(0.0, s2 / n - (s / n) * (s / n));
        ++count;
      }
    }
    total += sum / static_cast<double>(count);
    ++images;
  }
  return images == 0 ? 0.0 : total / static_cast<double>(images);
}

bool IsTextureless(const SequenceSet& set, const PipelineConfig& cfg) {
  switch (cfg.textureless) {
    case TexturelessMode::kOn: return true;
    case TexturelessMode::kOff: return false;
    case TexturelessMode::kAuto:
      return MeanLocalVariance(set) < cfg.textureless_threshold;
  }
  return false;
}

std::vector<DepthMap> EstimateAllDepthMaps(const std::vector<View>& views,
                                           const PipelineConfig& cfg,
                                           bool textureless) {
  PatchMatchConfig pm = cfg.patchmatch;
  if (textureless) pm = AdaptTextureless(pm, cfg.scale.Value());

  std::vector<DepthMap> maps(views.size());
  std::vector<std::exception_ptr> errors(views.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= views.size()) return;
      try {
        PatchMatchConfig view_cfg = pm;
        view_cfg.rng_seed = ViewSeed(cfg.rng_seed, i);
        std::vector<View> sources;
        for (const int s : SelectSourceViews(views, static_cast<int>(i), pm)) {
          sources.push_back(views[s]);
        }
        maps[i] = EstimateDepthMap(views[i], sources, view_cfg);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const int workers =
      std::max(1, std::min<int>(cfg.jobs, static_cast<int>(views.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int t = 0; t < workers; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return maps;
}

Reconstruction Reconstruct(const SequenceSet& set, const PipelineConfig& cfg,
                           bool textureless, StageTimer* timer) {
  cfg.Validate();
  if (set.views.size() < 2) {
    throw InvalidArgumentError("reconstruction needs at least 2 views, got " +
                               std::to_string(set.views.size()));
  }
  Reconstruction rec;
  rec.textureless = textureless;
  rec.views = RunStage("undistort", timer, [&] {
    std::vector<View> views;
    for (const View& v : set.views) views.push_back(UndistortView(v));
    return views;
  });
  rec.raw_maps = RunStage("patchmatch", timer, [&] {
    return EstimateAllDepthMaps(rec.views, cfg, textureless);
  });
  rec.maps = RunStage("speckle", timer, [&] {
    if (!textureless) return rec.raw_maps;
    std::vector<DepthMap> filtered;
    for (const DepthMap& m : rec.raw_maps) {
      filtered.push_back(SpeckleFilter(m, cfg.speckle));
    }
    return filtered;
  });
  rec.cloud = RunStage("fusion", timer,
                       [&] { return Fuse(rec.maps, rec.views, cfg.fusion); });
  return rec;
}

const ArmResult* ExperimentReport::Arm(SetLabel label) const {
  for (const ArmResult& arm : arms) {
    if (arm.label == label) return &arm;
  }
  return nullptr;
}

ExperimentInputs ExperimentFromScene(const SceneSpec& spec,
                                     const PipelineConfig& cfg) {
  if (cfg.scale.denominator != 1) {
    throw InvalidArgumentError("scene experiments need an integer scale, got " +
                               cfg.scale.ToString());
  }
  LrHrPair pair = MakeLrHrPair(spec, cfg.scale.numerator);
  ExperimentInputs inputs;
  inputs.scene = spec.name;
  inputs.lr = std::move(pair.lr);
  inputs.hr = std::move(pair.hr);
  inputs.gt = std::move(pair.gt.cloud);
  if (cfg.depth_range_from_scene) inputs.depth_range = spec.DepthRange();
  return inputs;
}

ExperimentReport RunExperiment(
    const ExperimentInputs& inputs, const PipelineConfig& base_cfg,
    const std::optional<std::filesystem::path>& external_dir) {
  PipelineConfig cfg = base_cfg;
  if (inputs.depth_range) {
    cfg.patchmatch.depth_min = inputs.depth_range->first;
    cfg.patchmatch.depth_max = inputs.depth_range->second;
  }
  cfg.Validate();
  const std::vector<double> tolerances = CmToMeters(cfg.tolerances_cm);

  std::vector<std::pair<SetLabel, SequenceSet>> sets;
  sets.emplace_back(SetLabel::kLR, inputs.lr);
  sets.back().second.label = SetLabel::kLR;
  sets.emplace_back(SetLabel::kBC, RunStage("BC/super_resolve", nullptr, [&] {
                      return SuperResolveSet(inputs.lr, cfg.scale);
                    }));
  if (external_dir) {
    sets.emplace_back(SetLabel::kEXT, RunStage("EXT/ingest", nullptr, [&] {
                        return IngestExternalSr(inputs.lr, *external_dir,
                                                cfg.scale);
                      }));
  }
  if (inputs.hr) sets.emplace_back(SetLabel::kHR, *inputs.hr);

  ExperimentReport report;
  report.scene = inputs.scene;
  for (auto& [label, set] : sets) {
    ArmResult arm;
    arm.label = label;
    const std::string name = ToString(label);
    try {
      arm.textureless = IsTextureless(set, cfg);
      Reconstruction rec = Reconstruct(set, cfg, arm.textureless, &arm.timer);
      arm.scores = RunStage("evaluate", &arm.timer, [&] {
        return Evaluate(rec.cloud, inputs.gt, tolerances);
      });
      arm.cloud = std::move(rec.cloud);
    } catch (const StageError& e) {
      throw StageError(name + "/" + e.Stage(), e.what());
    } catch (const std::exception& e) {
      throw StageError(name, e.what());
    }
    arm.scores.scene = inputs.scene;
    arm.scores.model = name;
    arm.points = arm.cloud.Size();
    report.arms.push_back(std::move(arm));
  }
  const ArmResult& lr = report.arms.front();
  for (std::size_t i = 1; i < report.arms.size(); ++i) {
    report.deltas.emplace_back(report.arms[i].label,
                               Improvement(lr.scores, report.arms[i].scores));
  }
  return report;
}

std::string FormatExperimentReport(const ExperimentReport& report) {
  std::vector<ScoreTable> tables;
  for (const ArmResult& arm : report.arms) tables.push_back(arm.scores);
  std::string out = "scene: " + report.scene + "\n\n" + FormatTextTable(tables);
  char buf[160];
  out += "\nimprovement over LR (percentage points, F1 / Acc / Comp)\n";
  for (const auto& [label, delta] : report.deltas) {
    for (const ImprovementRow& row : delta.rows) {
      std::snprintf(buf, sizeof(buf), "  %-3s tau=%6.1f cm  %+7.2f %+7.2f %+7.2f\n",
                    ToString(label), row.tolerance / kMetersPerCm, row.d_f1,
                    row.d_accuracy, row.d_completeness);
      out += buf;
    }
    std::snprintf(buf, sizeof(buf), "  %-3s mean           %+7.2f %+7.2f %+7.2f\n",
                  ToString(label), delta.mean.d_f1, delta.mean.d_accuracy,
                  delta.mean.d_completeness);
    out += buf;
  }
  out += "\narms\n";
  for (const ArmResult& arm : report.arms) {
    std::snprintf(buf, sizeof(buf), "  %-3s points=%zu textureless=%s\n",
                  ToString(arm.label), arm.points,
                  arm.textureless ? "yes" : "no");
    out += buf;
    for (const auto& [stage, seconds] : arm.timer.seconds) {
      std::snprintf(buf, sizeof(buf), "      %-12s %8.2f s\n", stage.c_str(),
                    seconds);
      out += buf;
    }
  }
  return out;
}

void WriteExperimentReport(const ExperimentReport& report,
                           const std::filesystem::path& dir) {
  std::string all = "arm,tau_cm,accuracy,completeness,f1\n";
  for (const ArmResult& arm : report.arms) {
    const std::filesystem::path arm_dir = dir / ToString(arm.label);
    WritePly(arm.cloud, arm_dir / "fused.ply");
    const std::string csv = FormatCsv(arm.scores);
    WriteTextFile(arm_dir / "scores.csv", csv);
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
      all += std::string(ToString(arm.label)) + "," + line + "\n";
    }
  }
  WriteTextFile(dir / "scores.csv", all);

  std::string deltas = "variant,tau_cm,d_accuracy_pp,d_completeness_pp,d_f1_pp\n";
  for (const auto& [label, delta] : report.deltas) {
    std::istringstream lines(FormatImprovementCsv(delta));
    std::string line;
    std::getline(lines, line);
    while (std::getline(lines, line)) {
      deltas += std::string(ToString(label)) + "," + line + "\n";
    }
  }
  WriteTextFile(dir / "deltas.csv", deltas);
  WriteTextFile(dir / "report.txt", FormatExperimentReport(report));
}

}  // namespace srmvs
