#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "srmvs/depth_filter.h"
#include "srmvs/evaluation.h"
#include "srmvs/patch_match.h"
#include "srmvs/sisr.h"
#include "srmvs/synth.h"

namespace {

using namespace srmvs;

PointCloud RandomCloud(std::mt19937_64& rng, int n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PointCloud c;
  c.points.reserve(n);
  for (int i = 0; i < n; ++i) c.points.emplace_back(u(rng), u(rng), 0.1 * u(rng));
  return c;
}

void BM_Evaluate(benchmark::State& state) {
  std::mt19937_64 rng(1);
  const PointCloud gt = RandomCloud(rng, static_cast<int>(state.range(0)));
  const PointCloud rec = RandomCloud(rng, static_cast<int>(state.range(0)));
  const std::vector<double> taus = CmToMeters(DefaultTolerancesCm());
  for (auto _ : state) benchmark::DoNotOptimize(Evaluate(rec, gt, taus));
  state.SetItemsProcessed(state.iterations() * 2 * state.range(0));
}
BENCHMARK(BM_Evaluate)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

void BM_ResampleBicubic(benchmark::State& state) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Image img(static_cast<int>(state.range(0)), static_cast<int>(state.range(0)) * 3 / 4, 3);
  for (double& v : img.Data()) v = u(rng);
  for (auto _ : state) benchmark::DoNotOptimize(ResampleBicubic(img, ScaleSpec(2)));
  state.SetItemsProcessed(state.iterations() * img.Width() * img.Height() * 4);
}
BENCHMARK(BM_ResampleBicubic)->Arg(128)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_Photoconsistency(benchmark::State& state) {
  const RenderResult scene = Render(PlaneScene(128, 96));
  PatchMatchConfig cfg;
  cfg.window_radius = static_cast<int>(state.range(0));
  const Hypothesis h{2.0, -Eigen::Vector3d::UnitZ()};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        Photoconsistency(scene.set.views[1], scene.set.views[0], 64, 48, h, cfg));
  }
}
BENCHMARK(BM_Photoconsistency)->Arg(5)->Arg(10);

void BM_EstimateDepthMap(benchmark::State& state) {
  const SceneSpec spec = PlaneScene(128, 96);
  const RenderResult scene = Render(spec);
  PatchMatchConfig cfg;
  std::tie(cfg.depth_min, cfg.depth_max) = spec.DepthRange();
  cfg.iterations = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        EstimateDepthMap(scene.set.views[1], {scene.set.views[0]}, cfg));
  }
}
BENCHMARK(BM_EstimateDepthMap)->Unit(benchmark::kMillisecond);

void BM_SpeckleFilter(benchmark::State& state) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int w = static_cast<int>(state.range(0));
  DepthMap m(w, w * 3 / 4, false);
  for (double& d : m.Depths()) d = u(rng) < 0.1 ? DepthMap::kInvalid : 2.0 + 0.5 * u(rng);
  const SpeckleConfig cfg{0.1, 0.01};
  for (auto _ : state) benchmark::DoNotOptimize(SpeckleFilter(m, cfg));
  state.SetItemsProcessed(state.iterations() * m.Size());
}
BENCHMARK(BM_SpeckleFilter)->Arg(256)->Arg(1024)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
