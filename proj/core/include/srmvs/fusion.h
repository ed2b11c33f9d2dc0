#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Core>

#include "srmvs/camera.h"
#include "srmvs/depth_map.h"
#include "srmvs/point_cloud.h"

namespace srmvs {

struct FusionConfig {
  // Other views that must agree with the reference pixel.
  int min_consistent_views = 2;
  double max_reprojection_error = 2.0;
  double max_relative_depth_diff = 0.01;
  double max_normal_angle = 30.0;

  void Validate() const;

  friend bool operator==(const FusionConfig&, const FusionConfig&) = default;
};

struct FusedPixel {
  int view = 0;
  int x = 0;
  int y = 0;
};

// Views are visited in order, pixels row-major. A pixel contributes to at
// most one point. `provenance`, when given, receives the contributing
// pixels of each emitted point (reference pixel first).
PointCloud Fuse(const std::vector<DepthMap>& maps,
                const std::vector<View>& views, const FusionConfig& cfg,
                std::vector<std::vector<FusedPixel>>* provenance = nullptr);

struct CloudStats {
  std::size_t count = 0;
  // Meaningless when count == 0.
  Eigen::Vector3d min = Eigen::Vector3d::Zero();
  Eigen::Vector3d max = Eigen::Vector3d::Zero();
};

CloudStats CloudSizeStats(const PointCloud& cloud);

}  // namespace srmvs
