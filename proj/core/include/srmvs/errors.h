#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace srmvs {

// Violated precondition on a function argument.
class InvalidArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed or inconsistent on-disk data.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NotFoundError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Aggregates every violation found while checking a compound object.
class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<std::string> violations);

  const std::vector<std::string>& Violations() const { return violations_; }

 private:
  std::vector<std::string> violations_;
};

// Failure inside a pipeline stage; the message is prefixed with the stage.
class StageError : public std::runtime_error {
 public:
  StageError(const std::string& stage, const std::string& what);

  const std::string& Stage() const { return stage_; }

 private:
  std::string stage_;
};

}  // namespace srmvs
