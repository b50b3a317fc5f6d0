#pragma once

#include <Eigen/Dense>

#include "amle/types.hpp"

namespace amle {

/// Metric on summary space. PilotMad is a placeholder resolved into concrete
/// per-component weights (median absolute deviations of a fixed-seed
/// prior-predictive pilot run) before any distance is evaluated.
struct DistanceSpec {
  enum class Kind { kEuclidean, kWeightedEuclidean, kPilotMad };

  Kind kind = Kind::kEuclidean;
  Eigen::VectorXd scale;  // weighted case only; all entries > 0

  static DistanceSpec euclidean() { return {}; }
  static DistanceSpec weighted(Eigen::VectorXd scale);
  static DistanceSpec pilot_mad() { return {Kind::kPilotMad, {}}; }
};

/// rho(a, b): Euclidean, or sqrt(sum(((a_i-b_i)/scale_i)^2)) when weighted.
[[nodiscard]] double distance(const DistanceSpec& spec, const SummaryVector& a, const SummaryVector& b);

}  // namespace amle
