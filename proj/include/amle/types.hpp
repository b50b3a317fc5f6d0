#pragma once

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "amle/rng.hpp"

namespace amle {

/// One real-valued coordinate with open-interval support (lower, upper).
struct ContinuousDim {
  std::string name;
  double lower = 0.0;
  double upper = 1.0;
};

/// One integer-valued coordinate with a finite support set.
struct DiscreteDim {
  std::string name;
  std::vector<long> values;
};

using Dim = std::variant<ContinuousDim, DiscreteDim>;

/// Parameter vectors are plain dense vectors in space order; discrete
/// coordinates are stored as exactly-representable integers.
using ParameterVector = Eigen::VectorXd;

/// The compact box/product set D carrying the uniform instrumental prior.
class ParameterSpace {
 public:
  explicit ParameterSpace(std::vector<Dim> dims);

  [[nodiscard]] const std::vector<Dim>& dims() const { return dims_; }
  [[nodiscard]] int size() const { return static_cast<int>(dims_.size()); }
  [[nodiscard]] int continuous_dim() const { return static_cast<int>(continuous_idx_.size()); }
  [[nodiscard]] int discrete_dim() const { return static_cast<int>(discrete_idx_.size()); }
  [[nodiscard]] bool has_discrete() const { return !discrete_idx_.empty(); }
  [[nodiscard]] const std::vector<int>& continuous_indices() const { return continuous_idx_; }
  [[nodiscard]] const std::vector<int>& discrete_indices() const { return discrete_idx_; }
  [[nodiscard]] std::vector<std::string> names() const;

  /// Continuous coordinates of theta, in space order.
  [[nodiscard]] Eigen::VectorXd continuous_part(const ParameterVector& theta) const;
  /// Discrete coordinates of theta, in space order.
  [[nodiscard]] std::vector<long> discrete_part(const ParameterVector& theta) const;

 private:
  std::vector<Dim> dims_;
  std::vector<int> continuous_idx_;
  std::vector<int> discrete_idx_;
};

/// True iff every coordinate lies inside its dim support (continuous dims
/// are open intervals; discrete dims test set membership).
[[nodiscard]] bool in_space(const ParameterSpace& space, const ParameterVector& theta);

/// Draw from the uniform prior over the space; the result always satisfies
/// in_space (continuous draws are rejected onto the open interval).
[[nodiscard]] ParameterVector uniform_prior_draw(const ParameterSpace& space, RngStream& rng);

/// A real-valued i.i.d. sample, one observation per row.
struct RealSample {
  Eigen::MatrixXd values;  // n x q
};

/// Event times of a point process observed on (0, horizon].
struct EventTimes {
  Eigen::VectorXd times;  // strictly increasing, all in (0, horizon]
  double horizon = 0.0;
};

using Dataset = std::variant<RealSample, EventTimes>;

[[nodiscard]] RealSample make_real_sample(Eigen::MatrixXd values);
[[nodiscard]] EventTimes make_event_times(Eigen::VectorXd times, double horizon);

/// Summary statistic value eta(x), optionally annotated with per-component
/// positive scales (unit when absent). Distances take their weights from
/// the DistanceSpec, not from here.
struct SummaryVector {
  Eigen::VectorXd components;
  std::optional<Eigen::VectorXd> scale;
};

[[nodiscard]] SummaryVector make_summary(Eigen::VectorXd components,
                                         std::optional<Eigen::VectorXd> scale = std::nullopt);

}  // namespace amle
