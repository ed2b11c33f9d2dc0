#include "srmvs/camera.h"

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.h"
#include "srmvs/errors.h"

namespace srmvs {
namespace {

PinholeCamera UnitCamera() {
  PinholeCamera cam;
  cam.fx = cam.fy = 1.0;
  cam.cx = cam.cy = 0.0;
  cam.width = cam.height = 1;
  return cam;
}

PinholeCamera RandomCamera(std::mt19937_64& rng, double max_k1 = 0.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  PinholeCamera cam;
  cam.width = 100 + static_cast<int>(500 * u(rng));
  cam.height = 80 + static_cast<int>(400 * u(rng));
  cam.fx = 80.0 + 600.0 * u(rng);
  cam.fy = cam.fx * (0.8 + 0.4 * u(rng));
  cam.cx = (0.3 + 0.4 * u(rng)) * cam.width;
  cam.cy = (0.3 + 0.4 * u(rng)) * cam.height;
  cam.k1 = max_k1 * (2.0 * u(rng) - 1.0);
  cam.k2 = 0.1 * cam.k1;
  return cam;
}

Pose RandomPose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Pose pose;
  pose.rotation = oracle::RandomRotation(rng);
  pose.translation = {u(rng), u(rng), u(rng)};
  return pose;
}

TEST(ProjectTest, OpticalAxis) {
  const auto p = Project({0.0, 0.0, 1.0}, UnitCamera(), Pose{});
  ASSERT_TRUE(p);
  EXPECT_EQ(p->u, 0.0);
  EXPECT_EQ(p->v, 0.0);
  EXPECT_EQ(p->depth, 1.0);
}

TEST(ProjectTest, BehindCamera) {
  EXPECT_FALSE(Project({0.0, 0.0, -1.0}, UnitCamera(), Pose{}));
  EXPECT_FALSE(Project({0.3, 0.1, 0.0}, UnitCamera(), Pose{}));
}

TEST(ProjectTest, DepthIsCameraZ) {
  Pose pose;
  pose.rotation = Eigen::AngleAxisd(0.3, Eigen::Vector3d::UnitY()).toRotationMatrix();
  pose.translation = {0.1, -0.2, 1.5};
  const Eigen::Vector3d world(0.4, 0.5, 2.0);
  const auto p = Project(world, UnitCamera(), pose);
  ASSERT_TRUE(p);
  EXPECT_NEAR(p->depth, pose.ToCamera(world).z(), 1e-15);
}

TEST(UnprojectTest, PrincipalRay) {
  std::mt19937_64 rng(3);
  const PinholeCamera cam = RandomCamera(rng);
  const Eigen::Vector3d x = Unproject(cam.cx, cam.cy, 2.5, cam, Pose{});
  EXPECT_NEAR(x.x(), 0.0, 1e-15);
  EXPECT_NEAR(x.y(), 0.0, 1e-15);
  EXPECT_EQ(x.z(), 2.5);
}

TEST(UnprojectTest, NonPositiveDepthThrows) {
  EXPECT_THROW(Unproject(0.0, 0.0, 0.0, UnitCamera(), Pose{}), InvalidArgumentError);
  EXPECT_THROW(Unproject(0.0, 0.0, -1.0, UnitCamera(), Pose{}), InvalidArgumentError);
}

TEST(UnprojectTest, RoundTripUndistorted) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const PinholeCamera cam = RandomCamera(rng);
    const Pose pose = RandomPose(rng);
    const double x = u(rng) * (cam.width - 1);
    const double y = u(rng) * (cam.height - 1);
    const double d = 0.1 + 10.0 * u(rng);
    const auto p = Project(Unproject(x, y, d, cam, pose), cam, pose);
    ASSERT_TRUE(p);
    worst = std::max({worst, std::abs(p->u - x), std::abs(p->v - y),
                      std::abs(p->depth - d)});
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(UnprojectTest, RoundTripDistorted) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    PinholeCamera cam = RandomCamera(rng, 0.05);
    // Keep the field of view where the radial polynomial is monotone.
    cam.fx = cam.fy = std::max(cam.width, cam.height) * (0.8 + u(rng));
    const Pose pose = RandomPose(rng);
    const double x = u(rng) * (cam.width - 1);
    const double y = u(rng) * (cam.height - 1);
    const auto p = Project(Unproject(x, y, 3.0, cam, pose), cam, pose);
    ASSERT_TRUE(p);
    worst = std::max({worst, std::abs(p->u - x), std::abs(p->v - y)});
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(UnprojectTest, ProjectThenUnproject) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const PinholeCamera cam = RandomCamera(rng);
    const Pose pose = RandomPose(rng);
    const Eigen::Vector3d cam_pt(u(rng), u(rng), 2.0 + u(rng));
    const Eigen::Vector3d world = pose.ToWorld(cam_pt);
    const auto p = Project(world, cam, pose);
    ASSERT_TRUE(p);
    EXPECT_LE((Unproject(p->u, p->v, p->depth, cam, pose) - world).norm(), 1e-9);
  }
}

TEST(DistortionTest, UndistortInvertsDistort) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  PinholeCamera cam = UnitCamera();
  cam.k1 = 0.1;
  cam.k2 = -0.02;
  for (int i = 0; i < 1000; ++i) {
    const Eigen::Vector2d p(u(rng), u(rng));
    EXPECT_LE((cam.Distort(cam.Undistort(p)) - p).norm(), 1e-6);
  }
}

TEST(PoseTest, ValidateRejectsNonRotation) {
  Pose pose;
  pose.rotation(0, 0) = 2.0;
  EXPECT_THROW(pose.Validate(), ValidationError);
  pose.rotation = -Eigen::Matrix3d::Identity();
  EXPECT_THROW(pose.Validate(), ValidationError);
}

TEST(PoseTest, LookAtPointsOpticalAxisAtTarget) {
  const Eigen::Vector3d eye(1.0, -3.0, 0.5);
  const Eigen::Vector3d target(0.0, 0.0, 0.2);
  const Pose pose = Pose::LookAt(eye, target, Eigen::Vector3d::UnitZ());
  EXPECT_NO_THROW(pose.Validate());
  EXPECT_LE((pose.Center() - eye).norm(), 1e-12);
  EXPECT_LE((pose.OpticalAxis() - (target - eye).normalized()).norm(), 1e-12);
  // World up projects upward in the image (negative v direction).
  const Eigen::Vector3d up_cam = pose.rotation * Eigen::Vector3d::UnitZ();
  EXPECT_LT(up_cam.y(), 0.0);
}

TEST(CameraTest, ValidateListsAllViolations) {
  PinholeCamera cam;
  cam.fx = 0.0;
  cam.fy = -1.0;
  cam.width = 10;
  cam.height = 10;
  cam.cx = 10.0;
  try {
    cam.Validate();
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.Violations().size(), 3u);
  }
}

TEST(ViewTest, ImageMustMatchCamera) {
  View view;
  view.camera.width = 4;
  view.camera.height = 3;
  view.image = Image(4, 4, 1);
  EXPECT_THROW(view.Validate(), ValidationError);
}

TEST(BilinearTest, NodesAndMidpoints) {
  Image img(2, 2, 1, std::vector<double>{0.0, 1.0, 0.2, 0.6});
  EXPECT_EQ(*BilinearSample(img, 0.0, 0.0), 0.0);
  EXPECT_EQ(*BilinearSample(img, 1.0, 1.0), 0.6);
  EXPECT_DOUBLE_EQ(*BilinearSample(img, 0.5, 0.0), 0.5);
  EXPECT_FALSE(BilinearSample(img, -1.0, 0.0));
  EXPECT_FALSE(BilinearSample(img, 0.0, 1.0001));
}

TEST(BilinearTest, AffineFieldExact) {
  Image img(20, 15, 1);
  for (int y = 0; y < 15; ++y) {
    for (int x = 0; x < 20; ++x) img.At(x, y) = 0.1 + 0.02 * x + 0.03 * y;
  }
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ux(0.0, 19.0);
  std::uniform_real_distribution<double> uy(0.0, 14.0);
  for (int i = 0; i < 1000; ++i) {
    const double u = ux(rng);
    const double v = uy(rng);
    EXPECT_NEAR(*BilinearSample(img, u, v), 0.1 + 0.02 * u + 0.03 * v, 1e-9);
  }
}

TEST(BilinearTest, MultiChannel) {
  Image img(2, 1, 3, std::vector<double>{0.0, 0.2, 0.4, 1.0, 0.4, 0.0});
  double out[3];
  ASSERT_TRUE(BilinearSample(img, 0.5, 0.0, out));
  EXPECT_DOUBLE_EQ(out[0], 0.5);
  EXPECT_DOUBLE_EQ(out[1], 0.3);
  EXPECT_DOUBLE_EQ(out[2], 0.2);
}

TEST(UndistortViewTest, IdentityWithoutDistortion) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  View view;
  view.camera = RandomCamera(rng);
  view.image = Image(view.camera.width, view.camera.height, 1);
  for (double& v : view.image.Data()) v = u(rng);
  const View out = UndistortView(view);
  EXPECT_EQ(out.image, view.image);
  EXPECT_EQ(out.camera, view.camera);
}

// Renders vertical sinusoidal stripes on the plane z = 1 through a distorted
// camera. Zero crossings of (I - 0.5) are the lines x = m * period in
// normalized coordinates, so after undistortion they must be straight.
View StripeView(double k1) {
  View view;
  view.camera.width = 320;
  view.camera.height = 240;
  view.camera.fx = view.camera.fy = 250.0;
  view.camera.cx = 159.5;
  view.camera.cy = 119.5;
  view.camera.k1 = k1;
  view.image = Image(320, 240, 1);
  constexpr double kPeriod = 0.1;
  for (int y = 0; y < 240; ++y) {
    for (int x = 0; x < 320; ++x) {
      const Eigen::Vector2d n = view.camera.ImageToNormalized(x, y);
      view.image.At(x, y) = 0.5 + 0.4 * std::sin(std::numbers::pi * n.x() / kPeriod);
    }
  }
  return view;
}

// Per stripe edge, the worst distance of its row crossings from a fitted line.
double WorstEdgeCurvature(const Image& img) {
  std::map<int, std::vector<Eigen::Vector2d>> edges;
  for (int y = 30; y < img.Height() - 30; ++y) {
    for (int x = 30; x < img.Width() - 31; ++x) {
      const double a = img.At(x, y) - 0.5;
      const double b = img.At(x + 1, y) - 0.5;
      if ((a < 0.0) == (b < 0.0)) continue;
      const double cross = x + a / (a - b);
      // Edges are ~12.5 px apart; bucket by position.
      edges[static_cast<int>(std::lround(cross / 12.5))].emplace_back(cross, y);
    }
  }
  double worst = 0.0;
  for (const auto& [id, pts] : edges) {
    if (pts.size() < 50) continue;
    worst = std::max(worst, oracle::MaxLineResidual(pts));
  }
  return worst;
}

TEST(UndistortViewTest, StraightensLines) {
  const View distorted = StripeView(0.1);
  const View undistorted = UndistortView(distorted);
  EXPECT_EQ(undistorted.camera.k1, 0.0);
  EXPECT_EQ(undistorted.image.Width(), 320);
  EXPECT_GT(WorstEdgeCurvature(distorted.image), 0.5);
  EXPECT_LT(WorstEdgeCurvature(undistorted.image), 0.1);
}

TEST(UndistortViewTest, PixelMappingRoundTrip) {
  PinholeCamera cam = StripeView(0.1).camera;
  double worst = 0.0;
  for (int y = 0; y < cam.height; y += 7) {
    for (int x = 0; x < cam.width; x += 7) {
      const Eigen::Vector2d n = cam.ImageToNormalized(x, y);
      const Eigen::Vector2d back = cam.NormalizedToImage(n);
      worst = std::max(worst, (back - Eigen::Vector2d(x, y)).norm());
    }
  }
  EXPECT_LE(worst, 1e-6);
}

}  // namespace
}  // namespace srmvs
