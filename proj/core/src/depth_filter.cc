#include "srmvs/depth_filter.h"

#include <cmath>
#include <string>
#include <vector>

#include "srmvs/errors.h"

namespace srmvs {

void SpeckleConfig::Validate() const {
  std::vector<std::string> violations;
  if (!(max_depth_range > 0.0)) {
    violations.push_back("speckle max_depth_range must be positive");
  }
  if (!(max_speckle_fraction > 0.0 && max_speckle_fraction <= 1.0)) {
    violations.push_back("speckle max_speckle_fraction must lie in (0, 1]");
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

DepthMap SpeckleFilter(const DepthMap& map, const SpeckleConfig& cfg) {
  cfg.Validate();
  DepthMap out = map;
  const int w = map.Width();
  const int h = map.Height();
  if (w == 0 || h == 0) return out;
  const double min_size = cfg.max_speckle_fraction * w * h;

  std::vector<int> label(map.Size(), -1);
  std::vector<int> stack;
  std::vector<int> component;
  int next_label = 0;
  for (int start = 0; start < static_cast<int>(map.Size()); ++start) {
    if (label[start] >= 0 || std::isnan(map.Depths()[start])) continue;
    component.clear();
    stack.push_back(start);
    label[start] = next_label;
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      component.push_back(idx);
      const int x = idx % w;
      const int y = idx / w;
      const double z = map.Depths()[idx];
      const int neighbors[4][2] = {{x - 1, y}, {x + 1, y}, {x, y - 1},
                                   {x, y + 1}};
      for (const auto& n : neighbors) {
        if (n[0] < 0 || n[0] >= w || n[1] < 0 || n[1] >= h) continue;
        const int nidx = n[1] * w + n[0];
        if (label[nidx] >= 0) continue;
        const double nz = map.Depths()[nidx];
        if (std::isnan(nz) || std::abs(nz - z) > cfg.max_depth_range) continue;
        label[nidx] = next_label;
        stack.push_back(nidx);
      }
    }
    ++next_label;
    if (static_cast<double>(component.size()) < min_size) {
      for (const int idx : component) out.Invalidate(idx % w, idx / w);
    }
  }
  return out;
}

double KeepFraction(const DepthMap& before, const DepthMap& after) {
  if (before.Width() != after.Width() || before.Height() != after.Height()) {
    throw InvalidArgumentError("keep fraction needs equally sized maps");
  }
  const std::size_t valid_before = before.CountValid();
  if (valid_before == 0) return 1.0;
  return static_cast<double>(after.CountValid()) /
         static_cast<double>(valid_before);
}

}  // namespace srmvs
