#include "srmvs/point_cloud.h"

#include <string>

#include "srmvs/errors.h"

namespace srmvs {

void PointCloud::Validate() const {
  std::vector<std::string> violations;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].allFinite()) {
      violations.push_back("point " + std::to_string(i) + " is not finite");
      break;
    }
  }
  if (!colors.empty() && colors.size() != points.size()) {
    violations.push_back("color count differs from point count");
  }
  if (!normals.empty() && normals.size() != points.size()) {
    violations.push_back("normal count differs from point count");
  }
  if (!violations.empty()) throw ValidationError(std::move(violations));
}

}  // namespace srmvs
