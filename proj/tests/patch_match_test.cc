#include "srmvs/patch_match.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "srmvs/errors.h"
#include "srmvs/synth.h"

namespace srmvs {
namespace {

std::vector<double> RandomPatch(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> p(n);
  for (double& v : p) v = u(rng);
  return p;
}

TEST(NccTest, SelfCorrelation) {
  std::mt19937_64 rng(1);
  const auto p = RandomPatch(rng, 121);
  const std::vector<double> w(121, 1.0);
  EXPECT_NEAR(Ncc(p, p, w), 1.0, 1e-9);
}

TEST(NccTest, NegationAboutMean) {
  std::mt19937_64 rng(2);
  const auto p = RandomPatch(rng, 49);
  double mean = 0.0;
  for (double v : p) mean += v;
  mean /= p.size();
  std::vector<double> q(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) q[i] = 2.0 * mean - p[i];
  EXPECT_NEAR(Ncc(p, q, std::vector<double>(49, 1.0)), -1.0, 1e-9);
}

TEST(NccTest, ConstantPatchGivesZero) {
  std::mt19937_64 rng(3);
  const auto p = RandomPatch(rng, 25);
  const std::vector<double> c(25, 0.4);
  const std::vector<double> w(25, 1.0);
  EXPECT_EQ(Ncc(c, p, w), 0.0);
  EXPECT_EQ(Ncc(p, c, w), 0.0);
}

TEST(NccTest, SymmetricAndAffineInvariant) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 3.0);
  for (int i = 0; i < 100; ++i) {
    const auto a = RandomPatch(rng, 121);
    const auto b = RandomPatch(rng, 121);
    const auto w = RandomPatch(rng, 121);
    const double ab = Ncc(a, b, w);
    EXPECT_NEAR(ab, Ncc(b, a, w), 1e-12);
    const double gain = u(rng);
    const double offset = u(rng) - 1.5;
    std::vector<double> a2(a.size());
    for (std::size_t k = 0; k < a.size(); ++k) a2[k] = gain * a[k] + offset;
    EXPECT_NEAR(Ncc(a2, b, w), ab, 1e-9);
    EXPECT_GE(ab, -1.0);
    EXPECT_LE(ab, 1.0);
  }
}

TEST(NccTest, BadInputsThrow) {
  const std::vector<double> a(9, 0.5);
  EXPECT_THROW(Ncc(a, std::vector<double>(8), a), InvalidArgumentError);
  EXPECT_THROW(Ncc(a, a, std::vector<double>(9, 0.0)), InvalidArgumentError);
  std::vector<double> neg(9, 1.0);
  neg[3] = -1.0;
  EXPECT_THROW(Ncc(a, a, neg), InvalidArgumentError);
}

TEST(BilateralWeightsTest, ConstantImageIsSpatialGaussian) {
  const Image img(30, 30, 1, 0.3);
  const int r = 5;
  const double sd = 2.5;
  const auto w = BilateralWeights(img, 15, 15, r, 0.2, sd);
  ASSERT_EQ(w.size(), 121u);
  for (int dy = -r; dy <= r; ++dy) {
    for (int dx = -r; dx <= r; ++dx) {
      EXPECT_NEAR(w[(dy + r) * 11 + dx + r],
                  std::exp(-(dx * dx + dy * dy) / (2.0 * sd * sd)), 1e-15);
    }
  }
  // Edge midpoint of the window: 5 px away with sd = r/2.
  EXPECT_NEAR(w[5 * 11 + 0], std::exp(-2.0), 1e-15);
}

TEST(BilateralWeightsTest, CenterIsOneAndClipped) {
  std::mt19937_64 rng(5);
  Image img(20, 20, 1);
  for (double& v : img.Data()) v = std::uniform_real_distribution<double>(0, 1)(rng);
  for (int y : {0, 7, 19}) {
    for (int x : {0, 11, 19}) {
      const auto w = BilateralWeights(img, x, y, 4, 0.2, 2.0);
      EXPECT_EQ(w[4 * 9 + 4], 1.0);
    }
  }
  const auto w = BilateralWeights(img, 0, 0, 4, 0.2, 2.0);
  EXPECT_EQ(w[0], 0.0);       // (-4, -4) lies outside
  EXPECT_GT(w[8 * 9 + 8], 0.0);
}

TEST(BilateralWeightsTest, StepEdgeSuppressesOtherSide) {
  Image img(11, 11, 1);
  for (int y = 0; y < 11; ++y) {
    for (int x = 0; x < 11; ++x) img.At(x, y) = x < 7 ? 0.2 : 0.8;
  }
  const auto w = BilateralWeights(img, 5, 5, 5, 0.2, 2.5);
  // Same spatial distance (2 px) on either side of the center.
  EXPECT_LT(w[5 * 11 + 7], w[5 * 11 + 3]);
  const double expected_ratio = std::exp(-0.36 / (2.0 * 0.04));
  EXPECT_NEAR(w[5 * 11 + 7] / w[5 * 11 + 3], expected_ratio, 1e-12);
}

class PlaneFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spec_ = new SceneSpec(PlaneScene(128, 96));
    scene_ = new RenderResult(Render(*spec_));
  }
  static void TearDownTestSuite() {
    delete scene_;
    delete spec_;
  }

  static PatchMatchConfig Config() {
    PatchMatchConfig cfg;
    std::tie(cfg.depth_min, cfg.depth_max) = spec_->DepthRange();
    cfg.rng_seed = 11;
    return cfg;
  }

  static const View& View_(int i) { return scene_->set.views[i]; }

  static SceneSpec* spec_;
  static RenderResult* scene_;
};

SceneSpec* PlaneFixture::spec_ = nullptr;
RenderResult* PlaneFixture::scene_ = nullptr;

TEST_F(PlaneFixture, PhotoconsistencyAtTruth) {
  const PatchMatchConfig cfg = Config();
  const double depth = scene_->gt.depth_maps[1].Depth(64, 48);
  EXPECT_NEAR(depth, 2.0, 1e-12);
  const Hypothesis truth{depth, -Eigen::Vector3d::UnitZ()};
  const Hypothesis off{1.2 * depth, -Eigen::Vector3d::UnitZ()};
  const double at_truth = Photoconsistency(View_(1), View_(0), 64, 48, truth, cfg);
  const double at_off = Photoconsistency(View_(1), View_(0), 64, 48, off, cfg);
  EXPECT_LT(at_truth, 0.05);
  EXPECT_GT(at_off, at_truth);
}

TEST_F(PlaneFixture, PhotoconsistencyOutOfBounds) {
  View far = View_(0);
  far.pose.translation.x() += 100.0;
  const Hypothesis h{2.0, -Eigen::Vector3d::UnitZ()};
  EXPECT_EQ(Photoconsistency(View_(1), far, 64, 48, h, Config()), 2.0);
}

TEST_F(PlaneFixture, CostMonotoneAndErrorShrinks) {
  const DepthMap& gt = scene_->gt.depth_maps[1];
  std::vector<double> previous;
  std::vector<double> medians;
  std::vector<int> iterations;
  const auto observer = [&](int iter, const DepthMap& m) {
    iterations.push_back(iter);
    if (!previous.empty()) {
      for (std::size_t i = 0; i < previous.size(); ++i) {
        ASSERT_LE(m.Costs()[i], previous[i]);
      }
    }
    previous = m.Costs();
    std::vector<double> err;
    for (int y = 0; y < m.Height(); ++y) {
      for (int x = 0; x < m.Width(); ++x) {
        err.push_back(std::abs(m.Depth(x, y) - gt.Depth(x, y)) / gt.Depth(x, y));
      }
    }
    std::nth_element(err.begin(), err.begin() + err.size() / 2, err.end());
    medians.push_back(err[err.size() / 2]);
  };
  const DepthMap map = EstimateDepthMap(View_(1), {View_(0), View_(2)}, Config(), observer);
  EXPECT_EQ(iterations, (std::vector<int>{1, 2, 3, 4, 5}));
  for (std::size_t i = 1; i < medians.size(); ++i) EXPECT_LE(medians[i], medians[i - 1]);
  EXPECT_LT(medians.back(), 0.01);

  const PatchMatchConfig cfg = Config();
  for (int y = 0; y < map.Height(); ++y) {
    for (int x = 0; x < map.Width(); ++x) {
      if (!map.IsValid(x, y)) continue;
      EXPECT_GE(map.Depth(x, y), cfg.depth_min);
      EXPECT_LE(map.Depth(x, y), cfg.depth_max);
      EXPECT_LE(map.Cost(x, y), cfg.MaxCost());
      EXPECT_NEAR(map.Normal(x, y).norm(), 1.0, 1e-6);
    }
  }
}

TEST_F(PlaneFixture, Deterministic) {
  PatchMatchConfig cfg = Config();
  cfg.iterations = 2;
  const DepthMap a = EstimateDepthMap(View_(1), {View_(0)}, cfg);
  const DepthMap b = EstimateDepthMap(View_(1), {View_(0)}, cfg);
  EXPECT_TRUE(a.Identical(b));
  cfg.rng_seed += 1;
  EXPECT_FALSE(a.Identical(EstimateDepthMap(View_(1), {View_(0)}, cfg)));
}

TEST_F(PlaneFixture, ConstantImagesAreMasked) {
  std::vector<View> views = {View_(0), View_(1)};
  for (View& v : views) v.image = Image(v.camera.width, v.camera.height, 1, 0.5);
  PatchMatchConfig cfg = Config();
  cfg.iterations = 1;
  const DepthMap map = EstimateDepthMap(views[1], {views[0]}, cfg);
  EXPECT_GE(1.0 - static_cast<double>(map.CountValid()) / map.Size(), 0.9);
}

TEST_F(PlaneFixture, PreconditionsChecked) {
  EXPECT_THROW(EstimateDepthMap(View_(1), {}, Config()), InvalidArgumentError);
  View distorted = View_(0);
  distorted.camera.k1 = 0.1;
  EXPECT_THROW(EstimateDepthMap(View_(1), {distorted}, Config()), InvalidArgumentError);
  PatchMatchConfig bad = Config();
  bad.window_radius = 0;
  EXPECT_THROW(EstimateDepthMap(View_(1), {View_(0)}, bad), ValidationError);
}

TEST(AdaptTexturelessTest, ScalesRadiusAndThreshold) {
  PatchMatchConfig cfg;
  const PatchMatchConfig out = AdaptTextureless(cfg, 2.0);
  EXPECT_EQ(out.window_radius, 10);
  EXPECT_DOUBLE_EQ(out.min_ncc, 0.05);
  EXPECT_TRUE(out.textureless_mode);

  PatchMatchConfig same = AdaptTextureless(cfg, 1.0);
  EXPECT_TRUE(same.textureless_mode);
  same.textureless_mode = false;
  EXPECT_EQ(same, cfg);
  EXPECT_THROW(AdaptTextureless(cfg, 0.5), InvalidArgumentError);
}

TEST(AdaptTexturelessTest, MasksNoLargerOnTexturelessScene) {
  SceneSpec spec = StandardScene("textureless_room");
  spec.width = 96;
  spec.height = 72;
  const RenderResult scene = Render(spec);
  PatchMatchConfig cfg;
  std::tie(cfg.depth_min, cfg.depth_max) = spec.DepthRange();
  cfg.iterations = 3;
  std::vector<View> sources;
  for (int s : SelectSourceViews(scene.set.views, 0, cfg)) {
    sources.push_back(scene.set.views[s]);
  }
  const DepthMap plain = EstimateDepthMap(scene.set.views[0], sources, cfg);
  const DepthMap adapted =
      EstimateDepthMap(scene.set.views[0], sources, AdaptTextureless(cfg, 2.0));
  EXPECT_GE(adapted.CountValid(), plain.CountValid());
}

TEST(SelectSourceViewsTest, PrefersMidRangeBaselines) {
  std::vector<View> views;
  for (double deg : {0.0, 3.0, 10.0, 24.0, 30.0, 60.0}) {
    View v;
    const double a = deg * 3.14159265358979323846 / 180.0;
    v.pose = Pose::LookAt({3.0 * std::sin(a), -3.0 * std::cos(a), 0.0},
                          Eigen::Vector3d::Zero(), Eigen::Vector3d::UnitZ());
    views.push_back(v);
  }
  PatchMatchConfig cfg;
  cfg.max_source_views = 2;
  EXPECT_EQ(SelectSourceViews(views, 0, cfg), (std::vector<int>{3, 4}));
  cfg.max_source_views = 10;
  EXPECT_EQ(SelectSourceViews(views, 0, cfg), (std::vector<int>{3, 4, 2}));
  // No view in range: fall back to the smallest angles.
  cfg.min_baseline_deg = 70.0;
  cfg.max_baseline_deg = 80.0;
  cfg.max_source_views = 2;
  EXPECT_EQ(SelectSourceViews(views, 0, cfg), (std::vector<int>{1, 2}));
}

TEST(PatchMatchConfigTest, ValidateListsViolations) {
  PatchMatchConfig cfg;
  cfg.window_radius = 0;
  cfg.iterations = 0;
  cfg.depth_min = 3.0;
  cfg.depth_max = 2.0;
  try {
    cfg.Validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.Violations().size(), 3u);
  }
  EXPECT_DOUBLE_EQ(PatchMatchConfig{}.SigmaDist(), 2.5);
}

}  // namespace
}  // namespace srmvs
