#pragma once

#include "srmvs/depth_map.h"

namespace srmvs {

struct SpeckleConfig {
  // Maximum absolute depth step between connected neighbors.
  double max_depth_range = 0.5;
  // Components smaller than this fraction of the map area are removed.
  double max_speckle_fraction = 0.01;

  void Validate() const;

  friend bool operator==(const SpeckleConfig&, const SpeckleConfig&) = default;
};

// Invalidates 4-connected components (|dz| <= max_depth_range between
// neighbors) with fewer than max_speckle_fraction * width * height pixels.
DepthMap SpeckleFilter(const DepthMap& map, const SpeckleConfig& cfg);

// |valid(after)| / |valid(before)|, 1 when `before` has no valid pixel.
double KeepFraction(const DepthMap& before, const DepthMap& after);

}  // namespace srmvs
