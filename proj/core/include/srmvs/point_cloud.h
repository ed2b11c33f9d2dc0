#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace srmvs {

struct PointCloud {
  std::vector<Eigen::Vector3d> points;
  // Empty, or one entry per point.
  std::vector<std::array<std::uint8_t, 3>> colors;
  std::vector<Eigen::Vector3d> normals;

  std::size_t Size() const { return points.size(); }
  bool Empty() const { return points.empty(); }
  bool HasColors() const { return !colors.empty(); }
  bool HasNormals() const { return !normals.empty(); }

  void Validate() const;
};

}  // namespace srmvs
