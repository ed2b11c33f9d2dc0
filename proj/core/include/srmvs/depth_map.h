#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace srmvs {

// Per-pixel depth, camera-frame normal and matching cost. Invalid pixels
// carry NaN depth. Normals are optional as a whole.
class DepthMap {
 public:
  DepthMap() = default;
  DepthMap(int width, int height, bool with_normals = true);

  int Width() const { return width_; }
  int Height() const { return height_; }
  std::size_t Size() const { return depth_.size(); }
  bool HasNormals() const { return !normals_.empty(); }

  std::size_t Index(int x, int y) const {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  bool IsValid(int x, int y) const { return !std::isnan(depth_[Index(x, y)]); }
  double Depth(int x, int y) const { return depth_[Index(x, y)]; }
  double Cost(int x, int y) const { return cost_[Index(x, y)]; }
  Eigen::Vector3d Normal(int x, int y) const;

  void Set(int x, int y, double depth, const Eigen::Vector3d& normal,
           double cost);
  void SetDepth(int x, int y, double depth) { depth_[Index(x, y)] = depth; }
  void SetCost(int x, int y, double cost) { cost_[Index(x, y)] = cost; }
  void SetNormal(int x, int y, const Eigen::Vector3d& normal);
  void Invalidate(int x, int y);

  std::size_t CountValid() const;

  std::vector<double>& Depths() { return depth_; }
  const std::vector<double>& Depths() const { return depth_; }
  // 3 * width * height, interleaved; empty when HasNormals() is false.
  std::vector<double>& Normals() { return normals_; }
  const std::vector<double>& Normals() const { return normals_; }
  std::vector<double>& Costs() { return cost_; }
  const std::vector<double>& Costs() const { return cost_; }

  // Bitwise equality (NaN == NaN).
  bool Identical(const DepthMap& other) const;

  static constexpr double kInvalid = std::numeric_limits<double>::quiet_NaN();

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<double> depth_;
  std::vector<double> normals_;
  std::vector<double> cost_;
};

}  // namespace srmvs
