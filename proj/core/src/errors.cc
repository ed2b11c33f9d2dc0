#include "srmvs/errors.h"

#include <utility>

namespace srmvs {
namespace {

std::string JoinViolations(const std::vector<std::string>& violations) {
  std::string out = "validation failed";
  for (const auto& v : violations) {
    out += "\n  - " + v;
  }
  return out;
}

}  // namespace

ValidationError::ValidationError(std::vector<std::string> violations)
    : std::runtime_error(JoinViolations(violations)),
      violations_(std::move(violations)) {}

StageError::StageError(const std::string& stage, const std::string& what)
    : std::runtime_error("[" + stage + "] " + what), stage_(stage) {}

}  // namespace srmvs
