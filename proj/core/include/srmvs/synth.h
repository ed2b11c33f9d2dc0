#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "srmvs/depth_map.h"
#include "srmvs/point_cloud.h"
#include "srmvs/sisr.h"

namespace srmvs {

// Procedural albedo. With amplitude 0 the surface is a constant
// `base_albedo` (textureless).
struct TextureSpec {
  double base_albedo = 0.5;
  double amplitude = 0.0;
  // Checker cell size in meters; 0 disables the checker term.
  double checker_scale = 0.0;
  // Share of the amplitude given to the checker term (rest goes to noise).
  double checker_weight = 0.5;
  // Value-noise lattice spacing in meters.
  double noise_scale = 0.05;
  int noise_octaves = 2;
  std::uint64_t noise_seed = 0;

  double Albedo(const Eigen::Vector3d& local) const;
};

enum class PrimitiveKind { kPlane, kSphere, kBox };

// Geometry is expressed in a local frame placed by (rotation, center):
// world = rotation * local + center. A plane is the local z = 0 rectangle
// with half extents (size.x, size.y), facing +z. A sphere has radius
// size.x. A box has half extents `size`.
struct Primitive {
  PrimitiveKind kind = PrimitiveKind::kPlane;
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d center = Eigen::Vector3d::Zero();
  Eigen::Vector3d size = Eigen::Vector3d::Ones();
  TextureSpec texture;

  static Primitive Plane(const Eigen::Vector3d& center,
                         const Eigen::Vector3d& normal, double half_width,
                         double half_height, const TextureSpec& texture);
  static Primitive Sphere(const Eigen::Vector3d& center, double radius,
                          const TextureSpec& texture);
  static Primitive Box(const Eigen::Vector3d& center,
                       const Eigen::Vector3d& half_extents, double yaw_deg,
                       const TextureSpec& texture);

  double SurfaceArea() const;
};

// kArc and kRing place cameras on a horizontal circle of `radius` around
// `look_at`, `height` above it, all looking at `look_at` (a ring spans 360
// degrees). kLine places them `baseline` apart along world x at distance
// `radius` in front of `look_at`, with parallel optical axes along +y.
struct CameraLayout {
  enum class Kind { kArc, kRing, kLine };

  Kind kind = Kind::kArc;
  int count = 5;
  double radius = 3.0;
  double height = 0.0;
  double arc_deg = 60.0;
  double baseline = 0.3;
  Eigen::Vector3d look_at = Eigen::Vector3d::Zero();
  double horizontal_fov_deg = 60.0;
  double k1 = 0.0;
  double k2 = 0.0;
};

struct SceneSpec {
  std::string name;
  std::vector<Primitive> primitives;  // the first one is the primary
  CameraLayout cameras;
  int width = 256;
  int height = 192;
  // Ground-truth cloud density in points per square meter.
  double gt_density = 40000.0;
  Eigen::Vector3d light_dir = Eigen::Vector3d(-0.3, 0.6, -1.0);
  double ambient = 0.35;
  std::uint64_t rng_seed = 0;
  bool textured = true;

  // Throws ValidationError listing all violations, including cameras that
  // see less than half of the primary primitive.
  void Validate() const;

  std::vector<View> MakeCameras() const;
  // Depth range covering every primitive from every camera, padded by 10%.
  std::pair<double, double> DepthRange() const;
};

struct GroundTruth {
  PointCloud cloud;
  std::vector<DepthMap> depth_maps;  // with camera-frame normals
};

struct RenderResult {
  SequenceSet set;
  GroundTruth gt;
};

struct RayHit {
  double t = 0.0;
  Eigen::Vector3d point;
  Eigen::Vector3d normal;  // world frame, facing the ray origin
  int primitive = -1;
};

// Nearest intersection along origin + t * dir, t > 1e-9.
std::optional<RayHit> Intersect(const SceneSpec& spec,
                                const Eigen::Vector3d& origin,
                                const Eigen::Vector3d& dir);

// Euclidean distance from `p` to the surface of primitive `index`.
double DistanceToSurface(const SceneSpec& spec, int index,
                         const Eigen::Vector3d& p);

RenderResult Render(const SceneSpec& spec);

struct LrHrPair {
  SequenceSet lr;
  SequenceSet hr;
  GroundTruth gt;
};

// HR at the scene resolution; LR is its bicubic down-sample by 1/k.
LrHrPair MakeLrHrPair(const SceneSpec& spec, int k);

std::vector<SceneSpec> StandardScenes();
// Throws NotFoundError for unknown names.
SceneSpec StandardScene(const std::string& name);

// Three cameras facing a textured fronto-parallel plane at depth 2.
SceneSpec PlaneScene(int width = 256, int height = 192);

}  // namespace srmvs
