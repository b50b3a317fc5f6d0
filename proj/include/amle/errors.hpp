#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace amle {

/// Sample in a KDE/bandwidth step has zero variance in some dimension.
class DegenerateSampleError : public std::runtime_error {
 public:
  explicit DegenerateSampleError(const std::string& what) : std::runtime_error(what) {}
};

/// Mean-shift iterate drifted so far from the sample that every kernel weight underflowed.
class LostTrackError : public std::runtime_error {
 public:
  explicit LostTrackError(const std::string& what) : std::runtime_error(what) {}
};

/// Discrete-conditioned estimation could not retain any discrete value with enough draws.
class EstimationFailureError : public std::runtime_error {
 public:
  explicit EstimationFailureError(const std::string& what) : std::runtime_error(what) {}
};

/// Configuration file failed validation; carries every issue found, not just the first.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::vector<std::string> issues)
      : std::runtime_error(what), issues_(std::move(issues)) {}
  [[nodiscard]] const std::vector<std::string>& issues() const { return issues_; }

 private:
  std::vector<std::string> issues_;
};

}  // namespace amle
