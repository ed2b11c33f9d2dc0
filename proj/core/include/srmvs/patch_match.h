#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "srmvs/camera.h"
#include "srmvs/depth_map.h"

namespace srmvs {

struct PatchMatchConfig {
  int window_radius = 5;
  double min_ncc = 0.1;
  int iterations = 5;
  double depth_min = 1.0;
  double depth_max = 8.0;
  int perturbation_halving = 3;
  // Number of best per-source costs averaged per pixel; 0 means all.
  int source_views_per_pixel = 0;
  // Source views picked per reference view by angular baseline.
  int max_source_views = 4;
  double min_baseline_deg = 5.0;
  double max_baseline_deg = 45.0;
  double sigma_color = 0.2;
  // Spatial sigma of the bilateral window; <= 0 means window_radius / 2.
  double sigma_dist = 0.0;
  bool textureless_mode = false;
  std::uint64_t rng_seed = 0;

  double SigmaDist() const {
    return sigma_dist > 0.0 ? sigma_dist : 0.5 * window_radius;
  }
  double MaxCost() const { return 1.0 - min_ncc; }

  void Validate() const;

  friend bool operator==(const PatchMatchConfig&,
                         const PatchMatchConfig&) = default;
};

// Depth plus a camera-frame unit normal facing the camera.
struct Hypothesis {
  double depth = 1.0;
  Eigen::Vector3d normal = -Eigen::Vector3d::UnitZ();
};

// Weighted NCC of two equally sized windows. Returns 0 when either weighted
// variance is below 1e-12. Throws InvalidArgumentError on size mismatch or
// when all weights vanish.
double Ncc(std::span<const double> ref_patch, std::span<const double> src_patch,
           std::span<const double> weights);

// (2r+1)^2 row-major weights around `center`; entries outside the image are
// zero. Uses the gray-level of the view's image.
std::vector<double> BilateralWeights(const Image& gray, int center_x,
                                     int center_y, int radius,
                                     double sigma_color, double sigma_dist);

// 1 - NCC of the reference window and its plane-induced warp into `src`.
// Returns 2 when more than half of the window maps outside `src`.
double Photoconsistency(const View& ref, const View& src, int x, int y,
                        const Hypothesis& hyp, const PatchMatchConfig& cfg);

// Called after every iteration with the 1-based iteration index and the
// unmasked state.
using IterationObserver = std::function<void(int, const DepthMap&)>;

// Randomized PatchMatch over depth and normal. Views must be undistorted.
DepthMap EstimateDepthMap(const View& ref, const std::vector<View>& sources,
                          const PatchMatchConfig& cfg,
                          const IterationObserver& observer = {});

PatchMatchConfig AdaptTextureless(const PatchMatchConfig& cfg, double k);

// Indices of up to cfg.max_source_views views whose optical axis makes an
// angle within [min, max] baseline with the reference view, closest to the
// middle of that range first. Falls back to the smallest-angle views when
// none qualify.
std::vector<int> SelectSourceViews(const std::vector<View>& views, int ref,
                                   const PatchMatchConfig& cfg);

}  // namespace srmvs
