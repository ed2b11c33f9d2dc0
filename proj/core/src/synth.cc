#include "srmvs/synth.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <limits>
#include <random>
#include <string>

#include <Eigen/Geometry>

#include "srmvs/errors.h"

namespace srmvs {
namespace {

constexpr double kRayEpsilon = 1e-9;
constexpr int kVisibilitySamples = 24;  // per axis on the primary surface

std::uint64_t Mix(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

double LatticeValue(std::int64_t x, std::int64_t y, std::int64_t z,
                    std::uint64_t seed) {
  std::uint64_t h = Mix(seed);
  h = Mix(h ^ static_cast<std::uint64_t>(x));
  h = Mix(h ^ static_cast<std::uint64_t>(y));
  h = Mix(h ^ static_cast<std::uint64_t>(z));
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double Smooth(double t) { return t * t * (3.0 - 2.0 * t); }

// Trilinearly interpolated lattice noise in [0, 1].
double ValueNoise(const Eigen::Vector3d& p, std::uint64_t seed) {
  const double fx = std::floor(p.x());
  const double fy = std::floor(p.y());
  const double fz = std::floor(p.z());
  const auto ix = static_cast<std::int64_t>(fx);
  const auto iy = static_cast<std::int64_t>(fy);
  const auto iz = static_cast<std::int64_t>(fz);
  const double tx = Smooth(p.x() - fx);
  const double ty = Smooth(p.y() - fy);
  const double tz = Smooth(p.z() - fz);
  double c[2][2][2];
  for (int dz = 0; dz < 2; ++dz)
    for (int dy = 0; dy < 2; ++dy)
      for (int dx = 0; dx < 2; ++dx)
        c[dz][dy][dx] = LatticeValue(ix + dx, iy + dy, iz + dz, seed);
  const auto lerp = [](double a, double b, double t) { return a + t * (b - a); };
  const double y0 = lerp(lerp(c[0][0][0], c[0][0][1], tx),
                         lerp(c[0][1][0], c[0][1][1], tx), ty);
  const double y1 = lerp(lerp(c[1][0][0], c[1][0][1], tx),
                         lerp(c[1][1][0], c[1][1][1], tx), ty);
  return lerp(y0, y1, tz);
}

Eigen::Matrix3d RotationFromNormal(const Eigen::Vector3d& normal) {
  const Eigen::Vector3d z = normal.normalized();
  const Eigen::Vector3d helper =
      std::abs(z.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX();
  const Eigen::Vector3d x = helper.cross(z).normalized();
  const Eigen::Vector3d y = z.cross(x);
  Eigen::Matrix3d r;
  r.col(0) = x;
  r.col(1) = y;
  r.col(2) = z;
  return r;
}

struct LocalHit {
  double t;
  Eigen::Vector3d normal;  // local frame
};

std::optional<LocalHit> IntersectLocal(const Primitive& prim,
                                       const Eigen::Vector3d& o,
                                       const Eigen::Vector3d& d) {
  switch (prim.kind) {
    case PrimitiveKind::kPlane: {
      if (d.z() == 0.0) return std::nullopt;
      const double t = -o.z() / d.z();
      if (!(t > kRayEpsilon)) return std::nullopt;
      const Eigen::Vector3d p = o + t * d;
      if (std::abs(p.x()) > prim.size.x() || std::abs(p.y()) > prim.size.y()) {
        return std::nullopt;
      }
      return LocalHit{t, Eigen::Vector3d::UnitZ()};
    }
    case PrimitiveKind::kSphere: {
      const double r = prim.size.x();
      const double a = d.squaredNorm();
      const double b = o.dot(d);
      const double c = o.squaredNorm() - r * r;
      const double disc = b * b - a * c;
      if (disc < 0.0) return std::nullopt;
      const double sq = std::sqrt(disc);
      double t = (-b - sq) / a;
      if (!(t > kRayEpsilon)) t = (-b + sq) / a;
      if (!(t > kRayEpsilon)) return std::nullopt;
      return LocalHit{t, (o + t * d) / r};
    }
    case PrimitiveKind::kBox: {
      double t_near = -std::numeric_limits<double>::infinity();
      double t_far = std::numeric_limits<double>::infinity();
      int axis_near = 0;
      int axis_far = 0;
      for (int a = 0; a < 3; ++a) {
        if (d[a] == 0.0) {
          if (std::abs(o[a]) > prim.size[a]) return std::nullopt;
          continue;
        }
        double t0 = (-prim.size[a] - o[a]) / d[a];
        double t1 = (prim.size[a] - o[a]) / d[a];
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > t_near) {
          t_near = t0;
          axis_near = a;
        }
        if (t1 < t_far) {
          t_far = t1;
          axis_far = a;
        }
      }
      if (t_near > t_far) return std::nullopt;
      double t = t_near;
      int axis = axis_near;
      if (!(t > kRayEpsilon)) {
        t = t_far;
        axis = axis_far;
      }
      if (!(t > kRayEpsilon)) return std::nullopt;
      Eigen::Vector3d n = Eigen::Vector3d::Zero();
      n[axis] = (o[axis] + t * d[axis]) > 0.0 ? 1.0 : -1.0;
      return LocalHit{t, n};
    }
  }
  return std::nullopt;
}

// Uniform samples on the surface of `prim`, `density` per square meter,
// jittered on a regular parameter grid.
std::vector<Eigen::Vector3d> SampleSurface(const Primitive& prim,
                                           double density, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> jitter(0.0, 1.0);
  std::vector<Eigen::Vector3d> local;
  const double spacing = 1.0 / std::sqrt(density);
  const auto rectangle = [&](const Eigen::Vector3d& origin,
                             const Eigen::Vector3d& u_axis,
                             const Eigen::Vector3d& v_axis, double u_len,
                             double v_len) {
    const int nu = std::max(1, static_cast<int>(std::ceil(u_len / spacing)));
    const int nv = std::max(1, static_cast<int>(std::ceil(v_len / spacing)));
    for (int j = 0; j < nv; ++j) {
      for (int i = 0; i < nu; ++i) {
        const double u = (i + jitter(rng)) / nu * u_len;
        const double v = (j + jitter(rng)) / nv * v_len;
        local.push_back(origin + u * u_axis + v * v_axis);
      }
    }
  };
  switch (prim.kind) {
    case PrimitiveKind::kPlane:
      rectangle({-prim.size.x(), -prim.size.y(), 0.0}, Eigen::Vector3d::UnitX(),
                Eigen::Vector3d::UnitY(), 2.0 * prim.size.x(),
                2.0 * prim.size.y());
      break;
    case PrimitiveKind::kSphere: {
      const double r = prim.size.x();
      const int n = std::max(
          1, static_cast<int>(std::lround(prim.SurfaceArea() * density)));
      const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
      for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = golden * i;
        local.emplace_back(r * rho * std::cos(phi), r * rho * std::sin(phi),
                           r * z);
      }
      break;
    }
    case PrimitiveKind::kBox: {
      const Eigen::Vector3d& h = prim.size;
      for (int axis = 0; axis < 3; ++axis) {
        const int a1 = (axis + 1) % 3;
        const int a2 = (axis + 2) % 3;
        for (const double side : {-1.0, 1.0}) {
          Eigen::Vector3d origin;
          origin[axis] = side * h[axis];
          origin[a1] = -h[a1];
          origin[a2] = -h[a2];
          Eigen::Vector3d u_axis = Eigen::Vector3d::Zero();
          Eigen::Vector3d v_axis = Eigen::Vector3d::Zero();
          u_axis[a1] = 1.0;
          v_axis[a2] = 1.0;
          rectangle(origin, u_axis, v_axis, 2.0 * h[a1], 2.0 * h[a2]);
        }
      }
      break;
    }
  }
  std::vector<Eigen::Vector3d> world;
  world.reserve(local.size());
  for (const auto& p : local) world.push_back(prim.rotation * p + prim.center);
  return world;
}

// Removes rounding noise across flat faces so the checker parity does not
// flicker between neighboring pixels.
Eigen::Vector3d SnapToSurface(const Primitive& prim, Eigen::Vector3d local) {
  if (prim.kind == PrimitiveKind::kPlane) {
    local.z() = 0.0;
  } else if (prim.kind == PrimitiveKind::kBox) {
    int axis = 0;
    double best = -1.0;
    for (int a = 0; a < 3; ++a) {
      const double r = std::abs(local[a]) / prim.size[a];
      if (r > best) {
        best = r;
        axis = a;
      }
    }
    local[axis] = local[axis] > 0.0 ? prim.size[axis] : -prim.size[axis];
  }
  return local;
}

double Shade(const SceneSpec& spec, const Eigen::Vector3d& normal) {
  const Eigen::Vector3d to_light = -spec.light_dir.normalized();
  return spec.ambient + (1.0 - spec.ambient) * std::max(0.0, normal.dot(to_light));
}

bool VisibleFrom(const SceneSpec& spec, const View& view,
                 const Eigen::Vector3d& point, int primitive) {
  const auto proj = Project(point, view);
  if (!proj) return false;
  if (proj->u < -0.5 || proj->v < -0.5 || proj->u > view.camera.width - 0.5 ||
      proj->v > view.camera.height - 0.5) {
    return false;
  }
  const Eigen::Vector3d origin = view.pose.Center();
  const Eigen::Vector3d dir = point - origin;
  const auto hit = Intersect(spec, origin, dir);
  return hit && hit->primitive == primitive && std::abs(hit->t - 1.0) < 1e-6;
}

TextureSpec Textured(std::uint64_t seed, double base, double checker) {
  TextureSpec t;
  t.base_albedo = base;
  t.amplitude = 0.35;
  t.checker_scale = checker;
  t.checker_weight = 0.4;
  t.noise_scale = 0.06;
  t.noise_octaves = 3;
  t.noise_seed = seed;
  return t;
}

TextureSpec Flat(double albedo) {
  TextureSpec t;
  t.base_albedo = albedo;
  t.amplitude = 0.0;
  return t;
}

}  // namespace

double TextureSpec::Albedo(const Eigen::Vector3d& local) const {
  if (amplitude == 0.0) return base_albedo;
  double checker = 0.0;
  double noise_weight = 1.0;
  if (checker_scale > 0.0) {
    const auto cell = [&](double v) {
      return static_cast<std::int64_t>(std::floor(v / checker_scale));
    };
    checker = ((cell(local.x()) + cell(local.y()) + cell(local.z())) & 1) != 0
                  ? 1.0
                  : -1.0;
    noise_weight = 1.0 - checker_weight;
  }
  double noise = 0.0;
  double weight = 1.0;
  double total = 0.0;
  double freq = 1.0 / noise_scale;
  for (int o = 0; o < std::max(noise_octaves, 1); ++o) {
    noise += weight * ValueNoise(local * freq, noise_seed + 7919 * o);
    total += weight;
    weight *= 0.5;
    freq *= 2.0;
  }
  noise /= total;
  const double checker_part = checker_scale > 0.0 ? checker_weight * checker : 0.0;
  return base_albedo +
         amplitude * (checker_part + noise_weight * (2.0 * noise - 1.0));
}

Primitive Primitive::Plane(const Eigen::Vector3d& center,
                           const Eigen::Vector3d& normal, double half_width,
                           double half_height, const TextureSpec& texture) {
  Primitive p;
  p.kind = PrimitiveKind::kPlane;
  p.rotation = RotationFromNormal(normal);
  p.center = center;
  p.size = {half_width, half_height, 0.0};
  p.texture = texture;
  return p;
}

Primitive Primitive::Sphere(const Eigen::Vector3d& center, double radius,
                            const TextureSpec& texture) {
  Primitive p;
  p.kind = PrimitiveKind::kSphere;
  p.center = center;
  p.size = {radius, radius, radius};
  p.texture = texture;
  return p;
}

Primitive Primitive::Box(const Eigen::Vector3d& center,
                         const Eigen::Vector3d& half_extents, double yaw_deg,
                         const TextureSpec& texture) {
  Primitive p;
  p.kind = PrimitiveKind::kBox;
  p.rotation =
      Eigen::AngleAxisd(yaw_deg * std::numbers::pi / 180.0, Eigen::Vector3d::UnitZ())
          .toRotationMatrix();
  p.center = center;
  p.size = half_extents;
  p.texture = texture;
  return p;
}

double Primitive::SurfaceArea() const {
  switch (kind) {
    case PrimitiveKind::kPlane: return 4.0 * size.x() * size.y();
    case PrimitiveKind::kSphere: return 4.0 * std::numbers::pi * size.x() * size.x();
    case PrimitiveKind::kBox:
      return 8.0 * (size.x() * size.y() + size.y() * size.z() +
                    size.x() * size.z());
  }
  return 0.0;
}

std::vector<View> SceneSpec::MakeCameras() const {
  std::vector<View> views;
  const CameraLayout& l = cameras;
  const double fx = 0.5 * width / std::tan(0.5 * l.horizontal_fov_deg * std::numbers::pi / 180.0);
  for (int i = 0; i < l.count; ++i) {
    Eigen::Vector3d eye;
    Eigen::Vector3d target = l.look_at;
    if (l.kind == CameraLayout::Kind::kLine) {
      const double offset = (i - 0.5 * (l.count - 1)) * l.baseline;
      eye = l.look_at + Eigen::Vector3d(offset, -l.radius, l.height);
      target = eye + Eigen::Vector3d(0.0, l.radius, 0.0);
    } else {
      double angle_deg = 0.0;
      if (l.kind == CameraLayout::Kind::kRing) {
        angle_deg = 360.0 * i / l.count;
      } else if (l.count > 1) {
        angle_deg = -0.5 * l.arc_deg + l.arc_deg * i / (l.count - 1);
      }
      const double a = angle_deg * std::numbers::pi / 180.0;
      eye = l.look_at + Eigen::Vector3d(l.radius * std::sin(a),
                                        -l.radius * std::cos(a), l.height);
    }
    View view;
    view.name = "cam" + std::to_string(i);
    view.camera.fx = fx;
    view.camera.fy = fx;
    view.camera.cx = 0.5 * (width - 1);
    view.camera.cy = 0.5 * (height - 1);
    view.camera.k1 = l.k1;
    view.camera.k2 = l.k2;
    view.camera.width = width;
    view.camera.height = height;
    view.pose = Pose::LookAt(eye, target, Eigen::Vector3d::UnitZ());
    view.image = Image(width, height, 1);
    views.push_back(std::move(view));
  }
  return views;
}

std::pair<double, double> SceneSpec::DepthRange() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (const View& view : MakeCameras()) {
    for (const Primitive& prim : primitives) {
      const Eigen::Vector3d extent =
          prim.kind == PrimitiveKind::kSphere
              ? Eigen::Vector3d::Constant(prim.size.x())
              : Eigen::Vector3d(prim.size.x(), prim.size.y(), prim.size.z());
      for (int c = 0; c < 8; ++c) {
        const Eigen::Vector3d corner(c & 1 ? extent.x() : -extent.x(),
                                     c & 2 ? extent.y() : -extent.y(),
                                     c & 4 ? extent.z() : -extent.z());
        const double z =
            view.pose.ToCamera(prim.rotation * corner + prim.center).z();
        if (z > 0.0) {
          lo = std::min(lo, z);
          hi = std::max(hi, z);
        }
      }
    }
  }
  if (!(hi > 0.0)) return {0.1, 10.0};
  return {std::max(0.9 * lo, 0.05), 1.1 * hi};
}

void SceneSpec::Validate() const {
  std::vector<std::string> violations;
  if (primitives.empty()) violations.push_back("scene needs a primitive");
  if (cameras.count < 2) violations.push_back("scene needs at least 2 cameras");
  if (width < 1 || height < 1) violations.push_back("resolution must be positive");
  if (!(gt_density > 0.0)) violations.push_back("gt_density must be positive");
  if (!(cameras.radius > 0.0)) violations.push_back("camera radius must be positive");
  if (!(cameras.horizontal_fov_deg > 0.0 && cameras.horizontal_fov_deg < 180.0)) {
    violations.push_back("horizontal fov must lie in (0, 180)");
  }
  for (std::size_t i = 0; i < primitives.size(); ++i) {
    const Primitive& p = primitives[i];
    const bool ok = p.kind == PrimitiveKind::kPlane
                        ? (p.size.x() > 0.0 && p.size.y() > 0.0)
                        : (p.size.array() > 0.0).all();
    if (!ok) {
      violations.push_back("primitive " + std::to_string(i) +
                           " has a non-positive size");
    }
    if (!(p.texture.noise_scale > 0.0)) {
      violations.push_back("primitive " + std::to_string(i) +
                           " has a non-positive noise scale");
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));

  // Frustum coverage of the primary primitive.
  std::mt19937_64 rng(rng_seed);
  const Primitive& primary = primitives.front();
  const double n = kVisibilitySamples * kVisibilitySamples;
  const auto samples =
      SampleSurface(primary, n / primary.SurfaceArea(), rng);
  for (const View& view : MakeCameras()) {
    std::size_t inside = 0;
    for (const auto& p : samples) {
      const auto proj = Project(p, view);
      if (proj && proj->u >= -0.5 && proj->v >= -0.5 &&
          proj->u <= width - 0.5 && proj->v <= height - 0.5) {
        ++inside;
      }
    }
    if (2 * inside < samples.size()) {
      violations.push_back(view.name + " sees less than half of the primary "
                                       "primitive");
    }
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

std::optional<RayHit> Intersect(const SceneSpec& spec,
                                const Eigen::Vector3d& origin,
                                const Eigen::Vector3d& dir) {
  std::optional<RayHit> best;
  for (int i = 0; i < static_cast<int>(spec.primitives.size()); ++i) {
    const Primitive& prim = spec.primitives[i];
    const Eigen::Matrix3d rt = prim.rotation.transpose();
    const auto hit =
        IntersectLocal(prim, rt * (origin - prim.center), rt * dir);
    if (!hit || (best && hit->t >= best->t)) continue;
    RayHit h;
    h.t = hit->t;
    h.point = origin + hit->t * dir;
    h.normal = prim.rotation * hit->normal;
    if (h.normal.dot(dir) > 0.0) h.normal = -h.normal;
    h.primitive = i;
    best = h;
  }
  return best;
}

double DistanceToSurface(const SceneSpec& spec, int index,
                         const Eigen::Vector3d& p) {
  const Primitive& prim = spec.primitives.at(index);
  const Eigen::Vector3d q = prim.rotation.transpose() * (p - prim.center);
  switch (prim.kind) {
    case PrimitiveKind::kPlane: {
      const double dx = std::max(std::abs(q.x()) - prim.size.x(), 0.0);
      const double dy = std::max(std::abs(q.y()) - prim.size.y(), 0.0);
      return std::sqrt(dx * dx + dy * dy + q.z() * q.z());
    }
    case PrimitiveKind::kSphere:
      return std::abs(q.norm() - prim.size.x());
    case PrimitiveKind::kBox: {
      const Eigen::Vector3d d = q.cwiseAbs() - prim.size;
      const double outside = d.cwiseMax(0.0).norm();
      const double inside = std::min(d.maxCoeff(), 0.0);
      return std::abs(outside + inside);
    }
  }
  return std::numeric_limits<double>::infinity();
}

RenderResult Render(const SceneSpec& spec) {
  spec.Validate();
  RenderResult result;
  result.set.label = SetLabel::kHR;
  result.set.views = spec.MakeCameras();

  for (View& view : result.set.views) {
    DepthMap depth(spec.width, spec.height, true);
    const Eigen::Vector3d origin = view.pose.Center();
    const Eigen::Matrix3d rt = view.pose.rotation.transpose();
    for (int y = 0; y < spec.height; ++y) {
      for (int x = 0; x < spec.width; ++x) {
        // Unit-z camera ray: the hit parameter equals the depth.
        const Eigen::Vector3d ray = PixelRay(x, y, view.camera);
        const auto hit = Intersect(spec, origin, rt * ray);
        if (!hit) continue;
        const Primitive& prim = spec.primitives[hit->primitive];
        const Eigen::Vector3d local =
            SnapToSurface(prim, prim.rotation.transpose() * (hit->point - prim.center));
        const double albedo = prim.texture.Albedo(local);
        view.image.At(x, y) = albedo * Shade(spec, hit->normal);
        depth.Set(x, y, hit->t, view.pose.rotation * hit->normal, 0.0);
      }
    }
    view.image.Clamp01();
    result.gt.depth_maps.push_back(std::move(depth));
  }

  std::mt19937_64 rng(spec.rng_seed ^ 0x5EEDC10D);
  for (int i = 0; i < static_cast<int>(spec.primitives.size()); ++i) {
    for (const auto& p :
         SampleSurface(spec.primitives[i], spec.gt_density, rng)) {
      for (const View& view : result.set.views) {
        if (VisibleFrom(spec, view, p, i)) {
          result.gt.cloud.points.push_back(p);
          break;
        }
      }
    }
  }
  return result;
}

LrHrPair MakeLrHrPair(const SceneSpec& spec, int k) {
  if (k < 1 || spec.width % k != 0 || spec.height % k != 0) {
    throw InvalidArgumentError("scene resolution " + std::to_string(spec.width) +
                               "x" + std::to_string(spec.height) +
                               " is not divisible by " + std::to_string(k));
  }
  RenderResult hr = Render(spec);
  LrHrPair pair;
  pair.lr = SuperResolveSet(hr.set, ScaleSpec(1, k));
  pair.lr.label = SetLabel::kLR;
  pair.hr = std::move(hr.set);
  pair.gt = std::move(hr.gt);
  return pair;
}

std::vector<SceneSpec> StandardScenes() {
  std::vector<SceneSpec> scenes;
  const Eigen::Vector3d up = Eigen::Vector3d::UnitZ();

  {
    SceneSpec s;
    s.name = "textured_wall";
    s.primitives = {
        Primitive::Plane({0.0, 0.6, 0.9}, {0.0, -1.0, 0.0}, 2.2, 1.0,
                         Textured(11, 0.55, 0.25)),
        Primitive::Plane({0.0, -0.6, 0.0}, up, 2.2, 1.2,
                         Textured(12, 0.45, 0.0)),
        Primitive::Box({0.3, 0.0, 0.25}, {0.25, 0.25, 0.25}, 20.0,
                       Textured(13, 0.6, 0.1)),
    };
    s.cameras.count = 5;
    s.cameras.radius = 3.0;
    s.cameras.height = 0.6;
    s.cameras.arc_deg = 50.0;
    s.cameras.look_at = {0.0, 0.0, 0.5};
    s.rng_seed = 101;
    scenes.push_back(s);
  }
  {
    SceneSpec s;
    s.name = "textured_boxes";
    s.primitives = {
        Primitive::Plane({0.0, 0.0, 0.0}, up, 2.0, 2.0, Textured(21, 0.5, 0.2)),
        Primitive::Box({-0.5, 0.2, 0.3}, {0.3, 0.3, 0.3}, 15.0,
                       Textured(22, 0.55, 0.12)),
        Primitive::Box({0.45, -0.1, 0.2}, {0.35, 0.2, 0.2}, -25.0,
                       Textured(23, 0.6, 0.0)),
        Primitive::Box({0.1, 0.8, 0.45}, {0.25, 0.25, 0.45}, 40.0,
                       Textured(24, 0.5, 0.15)),
    };
    s.cameras.count = 5;
    s.cameras.radius = 2.8;
    s.cameras.height = 1.6;
    s.cameras.arc_deg = 60.0;
    s.cameras.look_at = {0.0, 0.1, 0.2};
    s.rng_seed = 202;
    scenes.push_back(s);
  }
  {
    SceneSpec s;
    s.name = "textured_sphere";
    s.primitives = {
        Primitive::Plane({0.0, 0.8, 1.0}, {0.0, -1.0, 0.0}, 2.4, 1.2,
                         Textured(31, 0.5, 0.3)),
        Primitive::Sphere({0.0, 0.0, 0.55}, 0.55, Textured(32, 0.55, 0.0)),
        Primitive::Plane({0.0, -0.4, 0.0}, up, 2.4, 1.4,
                         Textured(33, 0.45, 0.2)),
    };
    s.cameras.count = 5;
    s.cameras.radius = 3.0;
    s.cameras.height = 0.7;
    s.cameras.arc_deg = 50.0;
    s.cameras.look_at = {0.0, 0.0, 0.6};
    s.rng_seed = 303;
    scenes.push_back(s);
  }
  {
    SceneSpec s;
    s.name = "textured_corner";
    s.primitives = {
        Primitive::Plane({-0.6, 0.6, 1.0},
                         Eigen::Vector3d(1.0, -1.0, 0.0).normalized(), 1.3, 1.0,
                         Textured(41, 0.5, 0.2)),
        Primitive::Plane({0.75, 0.75, 1.0},
                         Eigen::Vector3d(-1.0, -1.0, 0.0).normalized(), 1.3,
                         1.0, Textured(42, 0.55, 0.0)),
        Primitive::Plane({0.0, 0.0, 0.0}, up, 2.0, 2.0, Textured(43, 0.45, 0.3)),
        Primitive::Sphere({0.0, 0.3, 0.35}, 0.35, Textured(44, 0.6, 0.1)),
    };
    s.cameras.count = 5;
    s.cameras.radius = 3.2;
    s.cameras.height = 1.2;
    s.cameras.arc_deg = 40.0;
    s.cameras.look_at = {0.0, 0.3, 0.7};
    s.rng_seed = 404;
    s.light_dir = {0.2, 0.6, -1.0};
    scenes.push_back(s);
  }
  {
    SceneSpec s;
    s.name = "textureless_room";
    s.textured = false;
    s.primitives = {
        Primitive::Box({0.2, 0.0, 0.25}, {0.25, 0.25, 0.25}, 30.0, Flat(0.65)),
        Primitive::Plane({0.0, 1.0, 2.0}, {0.0, -1.0, 0.0}, 8.0, 2.0, Flat(0.7)),
        Primitive::Plane({0.0, -2.0, 0.0}, up, 8.0, 3.0, Flat(0.6)),
    };
    s.cameras.count = 5;
    s.cameras.radius = 3.0;
    s.cameras.height = 0.6;
    s.cameras.arc_deg = 50.0;
    s.cameras.look_at = {0.0, 0.0, 0.5};
    s.rng_seed = 505;
    scenes.push_back(s);
  }
  {
    SceneSpec s;
    s.name = "textureless_sphere";
    s.textured = false;
    s.primitives = {
        Primitive::Plane({0.0, 0.8, 1.0}, {0.0, -1.0, 0.0}, 2.4, 1.2, Flat(0.6)),
        Primitive::Sphere({0.0, 0.0, 0.4}, 0.4, Flat(0.7)),
        Primitive::Plane({0.0, -0.4, 0.0}, up, 2.4, 1.4, Flat(0.5)),
    };
    s.cameras.count = 4;
    s.cameras.radius = 3.0;
    s.cameras.height = 0.7;
    s.cameras.arc_deg = 45.0;
    s.cameras.look_at = {0.0, 0.0, 0.6};
    s.rng_seed = 606;
    scenes.push_back(s);
  }
  return scenes;
}

SceneSpec StandardScene(const std::string& name) {
  for (SceneSpec& s : StandardScenes()) {
    if (s.name == name) return s;
  }
  throw NotFoundError("unknown scene '" + name + "'");
}

SceneSpec PlaneScene(int width, int height) {
  SceneSpec s;
  s.name = "plane";
  TextureSpec texture = Textured(7, 0.5, 0.2);
  texture.noise_scale = 0.05;
  // Fronto-parallel to cameras on the x axis at y = -2 looking along +y.
  s.primitives = {
      Primitive::Plane({0.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, 1.5, 1.1, texture)};
  s.cameras.kind = CameraLayout::Kind::kLine;
  s.cameras.count = 3;
  s.cameras.radius = 2.0;
  s.cameras.baseline = 0.3;
  s.width = width;
  s.height = height;
  s.rng_seed = 1;
  s.gt_density = 10000.0;
  s.light_dir = {0.0, 1.0, -0.3};
  return s;
}

}  // namespace srmvs
