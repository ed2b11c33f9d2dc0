#pragma once

#include <optional>
#include <string>

#include <Eigen/Core>

#include "srmvs/image.h"

namespace srmvs {

// Pinhole intrinsics with a two-coefficient radial distortion acting on
// normalized image coordinates. Integer pixel coordinates address pixel
// centers.
struct PinholeCamera {
  double fx = 1.0;
  double fy = 1.0;
  double cx = 0.0;
  double cy = 0.0;
  double k1 = 0.0;
  double k2 = 0.0;
  int width = 1;
  int height = 1;

  bool HasDistortion() const { return k1 != 0.0 || k2 != 0.0; }

  // Throws ValidationError listing every broken invariant.
  void Validate() const;

  // Normalized undistorted -> normalized distorted.
  Eigen::Vector2d Distort(const Eigen::Vector2d& normalized) const;
  // Inverse of Distort by fixed-point iteration (10 iterations, 1e-10 stop).
  Eigen::Vector2d Undistort(const Eigen::Vector2d& distorted) const;

  Eigen::Vector2d ImageToNormalized(double u, double v) const;
  Eigen::Vector2d NormalizedToImage(const Eigen::Vector2d& normalized) const;

  friend bool operator==(const PinholeCamera&,
                         const PinholeCamera&) = default;
};

// World-to-camera rigid transform: x_cam = rotation * x_world + translation.
struct Pose {
  Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
  Eigen::Vector3d translation = Eigen::Vector3d::Zero();

  void Validate() const;

  Eigen::Vector3d ToCamera(const Eigen::Vector3d& world) const {
    return rotation * world + translation;
  }
  Eigen::Vector3d ToWorld(const Eigen::Vector3d& cam) const {
    return rotation.transpose() * (cam - translation);
  }
  Eigen::Vector3d Center() const {
    return -rotation.transpose() * translation;
  }
  // Viewing direction (camera +z) in world coordinates.
  Eigen::Vector3d OpticalAxis() const {
    return rotation.row(2).transpose();
  }

  // Camera at `eye` looking at `target`, with world `up` roughly image-up.
  static Pose LookAt(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                     const Eigen::Vector3d& up);

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.rotation == b.rotation && a.translation == b.translation;
  }
};

struct View {
  Image image;
  PinholeCamera camera;
  Pose pose;
  std::string name;

  void Validate() const;

  friend bool operator==(const View&, const View&) = default;
};

struct Projection {
  double u = 0.0;
  double v = 0.0;
  double depth = 0.0;
};

// Returns std::nullopt when the point is on or behind the image plane.
std::optional<Projection> Project(const Eigen::Vector3d& world,
                                  const PinholeCamera& camera,
                                  const Pose& pose);
inline std::optional<Projection> Project(const Eigen::Vector3d& world,
                                         const View& view) {
  return Project(world, view.camera, view.pose);
}

// Throws InvalidArgumentError for non-positive depth.
Eigen::Vector3d Unproject(double u, double v, double depth,
                          const PinholeCamera& camera, const Pose& pose);
inline Eigen::Vector3d Unproject(double u, double v, double depth,
                                 const View& view) {
  return Unproject(u, v, depth, view.camera, view.pose);
}

// Camera-frame direction with unit z through pixel (u, v).
Eigen::Vector3d PixelRay(double u, double v, const PinholeCamera& camera);

// Resamples the image onto an ideal pinhole camera with the same fx, fy,
// cx, cy and zero distortion.
View UndistortView(const View& view);

// Per-channel bilinear interpolation. Returns false (out of bounds) when the
// 2x2 support leaves the image; `out` must hold image.Channels() values.
bool BilinearSample(const Image& image, double u, double v, double* out);
std::optional<double> BilinearSample(const Image& image, double u, double v);

}  // namespace srmvs
