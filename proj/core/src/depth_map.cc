#include "srmvs/depth_map.h"

#include <algorithm>
#include <cstring>

#include "srmvs/errors.h"

namespace srmvs {

DepthMap::DepthMap(int width, int height, bool with_normals)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0) {
    throw InvalidArgumentError("depth map dimensions must be positive");
  }
  const std::size_t n = static_cast<std::size_t>(width) * height;
  depth_.assign(n, kInvalid);
  cost_.assign(n, kInvalid);
  if (with_normals) normals_.assign(3 * n, kInvalid);
}

Eigen::Vector3d DepthMap::Normal(int x, int y) const {
  if (normals_.empty()) {
    return Eigen::Vector3d::Constant(kInvalid);
  }
  const double* n = &normals_[3 * Index(x, y)];
  return {n[0], n[1], n[2]};
}

void DepthMap::SetNormal(int x, int y, const Eigen::Vector3d& normal) {
  if (normals_.empty()) return;
  double* n = &normals_[3 * Index(x, y)];
  n[0] = normal.x();
  n[1] = normal.y();
  n[2] = normal.z();
}

void DepthMap::Set(int x, int y, double depth, const Eigen::Vector3d& normal,
                   double cost) {
  depth_[Index(x, y)] = depth;
  cost_[Index(x, y)] = cost;
  SetNormal(x, y, normal);
}

void DepthMap::Invalidate(int x, int y) {
  depth_[Index(x, y)] = kInvalid;
  SetNormal(x, y, Eigen::Vector3d::Constant(kInvalid));
}

std::size_t DepthMap::CountValid() const {
  return static_cast<std::size_t>(std::count_if(
      depth_.begin(), depth_.end(), [](double d) { return !std::isnan(d); }));
}

bool DepthMap::Identical(const DepthMap& other) const {
  const auto same = [](const std::vector<double>& a,
                       const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() ||
            std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
  };
  return width_ == other.width_ && height_ == other.height_ &&
         same(depth_, other.depth_) && same(normals_, other.normals_) &&
         same(cost_, other.cost_);
}

}  // namespace srmvs
