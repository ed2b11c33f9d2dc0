#include "srmvs/fusion.h"

#include <cmath>
#include <vector>

#include <gtest/gtest.h>

#include "srmvs/errors.h"
#include "srmvs/synth.h"

namespace srmvs {
namespace {

class FusionFixture : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spec_ = new SceneSpec(PlaneScene(96, 72));
    scene_ = new RenderResult(Render(*spec_));
  }
  static void TearDownTestSuite() {
    delete scene_;
    delete spec_;
  }
  static const std::vector<View>& Views() { return scene_->set.views; }
  static const std::vector<DepthMap>& Maps() { return scene_->gt.depth_maps; }

  static SceneSpec* spec_;
  static RenderResult* scene_;
};

SceneSpec* FusionFixture::spec_ = nullptr;
RenderResult* FusionFixture::scene_ = nullptr;

TEST_F(FusionFixture, ExactMapsFuseOntoPlane) {
  FusionConfig cfg;
  std::vector<std::vector<FusedPixel>> provenance;
  const PointCloud cloud = Fuse(Maps(), Views(), cfg, &provenance);
  ASSERT_FALSE(cloud.Empty());
  ASSERT_EQ(provenance.size(), cloud.Size());
  for (const auto& p : cloud.points) EXPECT_LT(DistanceToSurface(*spec_, 0, p), 1e-6);
  for (std::size_t i = 0; i < cloud.Size(); ++i) {
    EXPECT_GE(static_cast<int>(provenance[i].size()), cfg.min_consistent_views + 1);
    for (const FusedPixel& px : provenance[i]) {
      const auto proj = Project(cloud.points[i], Views()[px.view]);
      ASSERT_TRUE(proj.has_value());
      EXPECT_LE(std::hypot(proj->u - px.x, proj->v - px.y), cfg.max_reprojection_error);
    }
  }
  EXPECT_EQ(cloud.normals.size(), cloud.Size());
}

TEST_F(FusionFixture, PixelsContributeOnce) {
  std::vector<std::vector<FusedPixel>> provenance;
  Fuse(Maps(), Views(), FusionConfig{}, &provenance);
  std::vector<std::vector<int>> used(Maps().size());
  for (std::size_t v = 0; v < used.size(); ++v) used[v].assign(Maps()[v].Size(), 0);
  for (const auto& list : provenance) {
    for (const FusedPixel& px : list) {
      ASSERT_EQ(used[px.view][Maps()[px.view].Index(px.x, px.y)]++, 0);
    }
  }
}

TEST_F(FusionFixture, SingleViewYieldsNothing) {
  const PointCloud cloud = Fuse({Maps()[0]}, {Views()[0]}, FusionConfig{});
  EXPECT_TRUE(cloud.Empty());
}

TEST_F(FusionFixture, CorruptedViewContributesNothing) {
  std::vector<DepthMap> maps = Maps();
  for (double& d : maps[2].Depths()) d *= 1.5;
  FusionConfig cfg;
  cfg.min_consistent_views = 1;
  std::vector<std::vector<FusedPixel>> provenance;
  const PointCloud cloud = Fuse(maps, Views(), cfg, &provenance);
  EXPECT_FALSE(cloud.Empty());
  for (const auto& list : provenance) {
    for (const FusedPixel& px : list) EXPECT_NE(px.view, 2);
  }
}

TEST_F(FusionFixture, StricterAgreementNeverGrows) {
  std::size_t previous = SIZE_MAX;
  for (int m = 1; m <= 3; ++m) {
    FusionConfig cfg;
    cfg.min_consistent_views = m;
    const std::size_t n = Fuse(Maps(), Views(), cfg).Size();
    EXPECT_LE(n, previous);
    previous = n;
  }
}

TEST_F(FusionFixture, DenseEnough) {
  // Exact maps on a scene every camera sees mostly in common.
  std::size_t valid = 0;
  for (const DepthMap& m : Maps()) valid += m.CountValid();
  FusionConfig cfg;
  cfg.min_consistent_views = 1;
  const PointCloud cloud = Fuse(Maps(), Views(), cfg);
  EXPECT_GT(static_cast<double>(cloud.Size()), 0.5 * valid / 2.0);
}

TEST_F(FusionFixture, Deterministic) {
  const PointCloud a = Fuse(Maps(), Views(), FusionConfig{});
  const PointCloud b = Fuse(Maps(), Views(), FusionConfig{});
  ASSERT_EQ(a.Size(), b.Size());
  for (std::size_t i = 0; i < a.Size(); ++i) EXPECT_EQ(a.points[i], b.points[i]);
}

TEST_F(FusionFixture, InvalidInputsThrow) {
  EXPECT_THROW(Fuse({Maps()[0]}, Views(), FusionConfig{}), InvalidArgumentError);
  std::vector<DepthMap> maps = Maps();
  maps[1] = DepthMap(10, 10);
  EXPECT_THROW(Fuse(maps, Views(), FusionConfig{}), InvalidArgumentError);
  FusionConfig bad;
  bad.max_reprojection_error = -1.0;
  EXPECT_THROW(Fuse(Maps(), Views(), bad), ValidationError);
}

TEST(CloudSizeStatsTest, CountsAndBounds) {
  EXPECT_EQ(CloudSizeStats(PointCloud{}).count, 0u);
  PointCloud c;
  c.points = {{0, 0, 0}, {1, -2, 3}, {-1, 5, 0.5}};
  const CloudStats s = CloudSizeStats(c);
  EXPECT_EQ(s.count, 3u);
  EXPECT_EQ(s.min, Eigen::Vector3d(-1, -2, 0));
  EXPECT_EQ(s.max, Eigen::Vector3d(1, 5, 3));
}

}  // namespace
}  // namespace srmvs
