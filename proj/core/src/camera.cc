#include "srmvs/camera.h"

#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Geometry>
#include <Eigen/LU>

#include "srmvs/errors.h"
#include "srmvs/sisr.h"

namespace srmvs {
namespace {

constexpr int kUndistortIterations = 10;
constexpr double kUndistortTolerance = 1e-10;

}  // namespace

void PinholeCamera::Validate() const {
  std::vector<std::string> violations;
  if (!(fx > 0.0)) violations.push_back("fx must be positive");
  if (!(fy > 0.0)) violations.push_back("fy must be positive");
  if (width <= 0 || height <= 0) {
    violations.push_back("camera dimensions must be positive");
  }
  if (!(cx >= 0.0 && cx < width)) {
    violations.push_back("cx must lie in [0, width)");
  }
  if (!(cy >= 0.0 && cy < height)) {
    violations.push_back("cy must lie in [0, height)");
  }
  if (!std::isfinite(k1) || !std::isfinite(k2)) {
    violations.push_back("distortion coefficients must be finite");
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

Eigen::Vector2d PinholeCamera::Distort(const Eigen::Vector2d& p) const {
  const double r2 = p.squaredNorm();
  return p * (1.0 + r2 * (k1 + k2 * r2));
}

Eigen::Vector2d PinholeCamera::Undistort(const Eigen::Vector2d& d) const {
  if (!HasDistortion()) return d;
  Eigen::Vector2d p = d;
  for (int i = 0; i < kUndistortIterations; ++i) {
    const double r2 = p.squaredNorm();
    const Eigen::Vector2d next = d / (1.0 + r2 * (k1 + k2 * r2));
    const double step = (next - p).norm();
    p = next;
    if (step < kUndistortTolerance) break;
  }
  return p;
}

Eigen::Vector2d PinholeCamera::ImageToNormalized(double u, double v) const {
  return Undistort(Eigen::Vector2d((u - cx) / fx, (v - cy) / fy));
}

Eigen::Vector2d PinholeCamera::NormalizedToImage(
    const Eigen::Vector2d& normalized) const {
  const Eigen::Vector2d d = Distort(normalized);
  return {fx * d.x() + cx, fy * d.y() + cy};
}

void Pose::Validate() const {
  std::vector<std::string> violations;
  if (!rotation.allFinite() || !translation.allFinite()) {
    violations.push_back("pose must be finite");
  } else {
    const double ortho =
        (rotation.transpose() * rotation - Eigen::Matrix3d::Identity())
            .cwiseAbs()
            .maxCoeff();
    if (ortho > 1e-9) violations.push_back("rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > 1e-9) {
      violations.push_back("rotation determinant is not +1");
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

Pose Pose::LookAt(const Eigen::Vector3d& eye, const Eigen::Vector3d& target,
                  const Eigen::Vector3d& up) {
  const Eigen::Vector3d z = (target - eye).normalized();
  const Eigen::Vector3d down = -(up - up.dot(z) * z).normalized();
  const Eigen::Vector3d x = down.cross(z).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Pose pose;
  pose.rotation.row(0) = x.transpose();
  pose.rotation.row(1) = y.transpose();
  pose.rotation.row(2) = z.transpose();
  pose.translation = -pose.rotation * eye;
  return pose;
}

void View::Validate() const {
  std::vector<std::string> violations;
  const auto collect = [&](auto&& check) {
    try {
      check();
    } catch (const ValidationError& e) {
      for (const auto& v : e.Violations()) {
        violations.push_back(name + ": " + v);
      }
    }
  };
  collect([&] { camera.Validate(); });
  collect([&] { pose.Validate(); });
  if (image.Width() != camera.width || image.Height() != camera.height) {
    violations.push_back(name + ": image is " + std::to_string(image.Width()) +
                         "x" + std::to_string(image.Height()) +
                         " but camera expects " + std::to_string(camera.width) +
                         "x" + std::to_string(camera.height));
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

std::optional<Projection> Project(const Eigen::Vector3d& world,
                                  const PinholeCamera& camera,
                                  const Pose& pose) {
  const Eigen::Vector3d cam = pose.ToCamera(world);
  if (!(cam.z() > 0.0)) return std::nullopt;
  const Eigen::Vector2d px =
      camera.NormalizedToImage(Eigen::Vector2d(cam.x() / cam.z(),
                                               cam.y() / cam.z()));
  return Projection{px.x(), px.y(), cam.z()};
}

Eigen::Vector3d PixelRay(double u, double v, const PinholeCamera& camera) {
  const Eigen::Vector2d n = camera.ImageToNormalized(u, v);
  return {n.x(), n.y(), 1.0};
}

Eigen::Vector3d Unproject(double u, double v, double depth,
                          const PinholeCamera& camera, const Pose& pose) {
  if (!(depth > 0.0)) {
    throw InvalidArgumentError("unproject requires positive depth, got " +
                               std::to_string(depth));
  }
  return pose.ToWorld(PixelRay(u, v, camera) * depth);
}

View UndistortView(const View& view) {
  View out = view;
  out.camera.k1 = 0.0;
  out.camera.k2 = 0.0;
  if (!view.camera.HasDistortion()) return out;

  const PinholeCamera& cam = view.camera;
  const int channels = view.image.Channels();
  std::vector<double> sample(channels);
  for (int y = 0; y < cam.height; ++y) {
    for (int x = 0; x < cam.width; ++x) {
      const Eigen::Vector2d src = cam.NormalizedToImage(
          Eigen::Vector2d((x - cam.cx) / cam.fx, (y - cam.cy) / cam.fy));
      BicubicSample(view.image, src.x(), src.y(), sample.data());
      for (int c = 0; c < channels; ++c) out.image.At(x, y, c) = sample[c];
    }
  }
  out.image.Clamp01();
  return out;
}

bool BilinearSample(const Image& image, double u, double v, double* out) {
  const int w = image.Width();
  const int h = image.Height();
  if (!(u >= 0.0 && v >= 0.0 && u <= w - 1 && v <= h - 1)) return false;
  int x0 = static_cast<int>(u);
  int y0 = static_cast<int>(v);
  if (x0 > w - 2) x0 = std::max(w - 2, 0);
  if (y0 > h - 2) y0 = std::max(h - 2, 0);
  const int x1 = std::min(x0 + 1, w - 1);
  const int y1 = std::min(y0 + 1, h - 1);
  const double ax = u - x0;
  const double ay = v - y0;
  for (int c = 0; c < image.Channels(); ++c) {
    const double top =
        (1.0 - ax) * image.At(x0, y0, c) + ax * image.At(x1, y0, c);
    const double bottom =
        (1.0 - ax) * image.At(x0, y1, c) + ax * image.At(x1, y1, c);
    out[c] = (1.0 - ay) * top + ay * bottom;
  }
  return true;
}

std::optional<double> BilinearSample(const Image& image, double u, double v) {
  double value[3];
  if (!BilinearSample(image, u, v, value)) return std::nullopt;
  return value[0];
}

}  // namespace srmvs
