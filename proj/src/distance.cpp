#include "amle/distance.hpp"

#include <stdexcept>

namespace amle {

DistanceSpec DistanceSpec::weighted(Eigen::VectorXd scale) {
  if (scale.size() == 0) throw std::invalid_argument("DistanceSpec: weighted scale must be nonempty");
  if ((scale.array() <= 0.0).any()) throw std::invalid_argument("DistanceSpec: weights must be positive");
  return {Kind::kWeightedEuclidean, std::move(scale)};
}

double distance(const DistanceSpec& spec, const SummaryVector& a, const SummaryVector& b) {
  if (a.components.size() != b.components.size()) {
    throw std::invalid_argument("distance: summary dimension mismatch");
  }
  switch (spec.kind) {
    case DistanceSpec::Kind::kEuclidean:
      return (a.components - b.components).norm();
    case DistanceSpec::Kind::kWeightedEuclidean:
      if (spec.scale.size() != a.components.size()) {
        throw std::invalid_argument("distance: weight length does not match summary dimension");
      }
      return ((a.components - b.components).array() / spec.scale.array()).matrix().norm();
    case DistanceSpec::Kind::kPilotMad:
      throw std::logic_error("distance: pilot-MAD spec must be resolved before evaluation");
  }
  throw std::logic_error("distance: unknown kind");
}

}  // namespace amle
