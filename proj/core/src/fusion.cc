#include "srmvs/fusion.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "srmvs/errors.h"

namespace srmvs {
namespace {

struct Contribution {
  FusedPixel pixel;
  Eigen::Vector3d point;
  Eigen::Vector3d normal;  // world frame; NaN when unknown
};

Eigen::Vector3d WorldNormal(const DepthMap& map, const View& view, int x,
                            int y) {
  if (!map.HasNormals()) return Eigen::Vector3d::Constant(DepthMap::kInvalid);
  const Eigen::Vector3d n = map.Normal(x, y);
  if (!n.allFinite()) return n;
  return view.pose.rotation.transpose() * n;
}

double ReprojectionError(const Eigen::Vector3d& point, const View& view,
                         const FusedPixel& pixel) {
  const auto proj = Project(point, view);
  if (!proj) return std::numeric_limits<double>::infinity();
  return std::hypot(proj->u - pixel.x, proj->v - pixel.y);
}

Eigen::Vector3d Mean(const std::vector<Contribution>& contributions) {
  Eigen::Vector3d sum = Eigen::Vector3d::Zero();
  for (const auto& c : contributions) sum += c.point;
  return sum / static_cast<double>(contributions.size());
}

}  // namespace

void FusionConfig::Validate() const {
  std::vector<std::string> violations;
  if (min_consistent_views < 1) {
    violations.push_back("fusion min_consistent_views must be >= 1");
  }
  if (!(max_reprojection_error > 0.0) || !(max_relative_depth_diff > 0.0) ||
      !(max_normal_angle > 0.0)) {
    violations.push_back("fusion thresholds must be positive");
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

PointCloud Fuse(const std::vector<DepthMap>& maps,
                const std::vector<View>& views, const FusionConfig& cfg,
                std::vector<std::vector<FusedPixel>>* provenance) {
  cfg.Validate();
  if (maps.size() != views.size()) {
    throw InvalidArgumentError("fusion got " + std::to_string(maps.size()) +
                               " depth maps for " +
                               std::to_string(views.size()) + " views");
  }
  for (std::size_t i = 0; i < maps.size(); ++i) {
    if (maps[i].Width() != views[i].camera.width ||
        maps[i].Height() != views[i].camera.height) {
      throw InvalidArgumentError("depth map of view '" + views[i].name +
                                 "' does not match its camera");
    }
  }
  if (provenance != nullptr) provenance->clear();

  const double min_cos_normal = std::cos(cfg.max_normal_angle * std::numbers::pi / 180.0);
  std::vector<std::vector<char>> consumed(maps.size());
  for (std::size_t i = 0; i < maps.size(); ++i) {
    consumed[i].assign(maps[i].Size(), 0);
  }

  const bool with_normals =
      std::all_of(maps.begin(), maps.end(),
                  [](const DepthMap& m) { return m.HasNormals(); });
  PointCloud cloud;
  std::vector<Contribution> contributions;
  for (int i = 0; i < static_cast<int>(maps.size()); ++i) {
    const DepthMap& ref_map = maps[i];
    const View& ref_view = views[i];
    for (int y = 0; y < ref_map.Height(); ++y) {
      for (int x = 0; x < ref_map.Width(); ++x) {
        if (!ref_map.IsValid(x, y) || consumed[i][ref_map.Index(x, y)]) {
          continue;
        }
        const double depth = ref_map.Depth(x, y);
        if (!(depth > 0.0)) continue;
        contributions.clear();
        const FusedPixel ref_pixel{i, x, y};
        contributions.push_back({ref_pixel, Unproject(x, y, depth, ref_view),
                                 WorldNormal(ref_map, ref_view, x, y)});
        const Eigen::Vector3d& point = contributions.front().point;
        const Eigen::Vector3d& ref_normal = contributions.front().normal;

        for (int j = 0; j < static_cast<int>(maps.size()); ++j) {
          if (j == i) continue;
          const DepthMap& map = maps[j];
          const auto proj = Project(point, views[j]);
          if (!proj) continue;
          const int px = static_cast<int>(std::lround(proj->u));
          const int py = static_cast<int>(std::lround(proj->v));
          if (px < 0 || py < 0 || px >= map.Width() || py >= map.Height()) {
            continue;
          }
          if (!map.IsValid(px, py) || consumed[j][map.Index(px, py)]) continue;
          const double stored = map.Depth(px, py);
          if (!(stored > 0.0) ||
              std::abs(proj->depth - stored) / stored >
                  cfg.max_relative_depth_diff) {
            continue;
          }
          const FusedPixel pixel{j, px, py};
          const Eigen::Vector3d estimate = Unproject(px, py, stored, views[j]);
          if (ReprojectionError(estimate, ref_view, ref_pixel) >
              cfg.max_reprojection_error) {
            continue;
          }
          const Eigen::Vector3d normal = WorldNormal(map, views[j], px, py);
          if (ref_normal.allFinite() && normal.allFinite() &&
              ref_normal.dot(normal) < min_cos_normal) {
            continue;
          }
          contributions.push_back({pixel, estimate, normal});
        }

        // Drop the worst contributor until the averaged point reprojects
        // within tolerance into every contributing pixel.
        Eigen::Vector3d fused;
        while (true) {
          if (static_cast<int>(contributions.size()) - 1 <
              cfg.min_consistent_views) {
            break;
          }
          fused = Mean(contributions);
          double worst_error = 0.0;
          std::size_t worst = 0;
          for (std::size_t c = 0; c < contributions.size(); ++c) {
            const double err = ReprojectionError(
                fused, views[contributions[c].pixel.view],
                contributions[c].pixel);
            if (err > worst_error) {
              worst_error = err;
              worst = c;
            }
          }
          if (worst_error <= cfg.max_reprojection_error) break;
          // The reference pixel stays; drop the worst other contributor.
          if (worst == 0) {
            double other_error = -1.0;
            for (std::size_t c = 1; c < contributions.size(); ++c) {
              const double err = ReprojectionError(
                  fused, views[contributions[c].pixel.view],
                  contributions[c].pixel);
              if (err > other_error) {
                other_error = err;
                worst = c;
              }
            }
          }
          contributions.erase(contributions.begin() +
                              static_cast<std::ptrdiff_t>(worst));
        }
        if (static_cast<int>(contributions.size()) - 1 <
            cfg.min_consistent_views) {
          continue;
        }

        std::array<double, 3> color = {0.0, 0.0, 0.0};
        Eigen::Vector3d normal_sum = Eigen::Vector3d::Zero();
        for (const auto& c : contributions) {
          const View& view = views[c.pixel.view];
          consumed[c.pixel.view][maps[c.pixel.view].Index(c.pixel.x,
                                                          c.pixel.y)] = 1;
          for (int ch = 0; ch < 3; ++ch) {
            const int src_ch = view.image.Channels() == 3 ? ch : 0;
            color[ch] += view.image.At(c.pixel.x, c.pixel.y, src_ch);
          }
          if (c.normal.allFinite()) normal_sum += c.normal;
        }
        const double count = static_cast<double>(contributions.size());
        cloud.points.push_back(fused);
        std::array<std::uint8_t, 3> rgb;
        for (int ch = 0; ch < 3; ++ch) {
          rgb[ch] = static_cast<std::uint8_t>(
              std::lround(std::clamp(color[ch] / count, 0.0, 1.0) * 255.0));
        }
        cloud.colors.push_back(rgb);
        if (with_normals) {
          // Fall back to facing the reference camera.
          cloud.normals.push_back(
              normal_sum.norm() > 0.0
                  ? normal_sum.normalized()
                  : (ref_view.pose.Center() - fused).normalized());
        }
        if (provenance != nullptr) {
          std::vector<FusedPixel> pixels;
          for (const auto& c : contributions) pixels.push_back(c.pixel);
          provenance->push_back(std::move(pixels));
        }
      }
    }
  }
  return cloud;
}

CloudStats CloudSizeStats(const PointCloud& cloud) {
  CloudStats stats;
  stats.count = cloud.points.size();
  if (cloud.points.empty()) return stats;
  stats.min = stats.max = cloud.points.front();
  for (const auto& p : cloud.points) {
    stats.min = stats.min.cwiseMin(p);
    stats.max = stats.max.cwiseMax(p);
  }
  return stats;
}

}  // namespace srmvs
