#include "amle/types.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace amle {

ParameterSpace::ParameterSpace(std::vector<Dim> dims) : dims_(std::move(dims)) {
  if (dims_.empty()) throw std::invalid_argument("ParameterSpace: at least one dim required");
  for (int i = 0; i < static_cast<int>(dims_.size()); ++i) {
    if (const auto* c = std::get_if<ContinuousDim>(&dims_[i])) {
      if (!(c->lower < c->upper)) {
        throw std::invalid_argument("ParameterSpace: dim '" + c->name + "' needs lower < upper");
      }
      if (!std::isfinite(c->lower) || !std::isfinite(c->upper)) {
        throw std::invalid_argument("ParameterSpace: dim '" + c->name + "' bounds must be finite");
      }
      continuous_idx_.push_back(i);
    } else {
      const auto& d = std::get<DiscreteDim>(dims_[i]);
      if (d.values.empty()) throw std::invalid_argument("ParameterSpace: dim '" + d.name + "' has empty value set");
      std::set<long> uniq(d.values.begin(), d.values.end());
      if (uniq.size() != d.values.size()) {
        throw std::invalid_argument("ParameterSpace: dim '" + d.name + "' has duplicate values");
      }
      discrete_idx_.push_back(i);
    }
  }
}

std::vector<std::string> ParameterSpace::names() const {
  std::vector<std::string> out;
  out.reserve(dims_.size());
  for (const auto& d : dims_) {
    std::visit([&out](const auto& dim) { out.push_back(dim.name); }, d);
  }
  return out;
}

Eigen::VectorXd ParameterSpace::continuous_part(const ParameterVector& theta) const {
  if (theta.size() != size()) throw std::invalid_argument("continuous_part: dimension mismatch");
  Eigen::VectorXd out(continuous_dim());
  for (int j = 0; j < continuous_dim(); ++j) out[j] = theta[continuous_idx_[j]];
  return out;
}

std::vector<long> ParameterSpace::discrete_part(const ParameterVector& theta) const {
  if (theta.size() != size()) throw std::invalid_argument("discrete_part: dimension mismatch");
  std::vector<long> out(discrete_idx_.size());
  for (std::size_t j = 0; j < discrete_idx_.size(); ++j) out[j] = std::lround(theta[discrete_idx_[j]]);
  return out;
}

bool in_space(const ParameterSpace& space, const ParameterVector& theta) {
  if (theta.size() != space.size()) throw std::invalid_argument("in_space: dimension mismatch");
  for (int i = 0; i < space.size(); ++i) {
    const Dim& dim = space.dims()[i];
    if (const auto* c = std::get_if<ContinuousDim>(&dim)) {
      if (!(theta[i] > c->lower && theta[i] < c->upper)) return false;
    } else {
      const auto& d = std::get<DiscreteDim>(dim);
      const double v = theta[i];
      if (v != std::floor(v)) return false;
      const long lv = std::lround(v);
      if (std::find(d.values.begin(), d.values.end(), lv) == d.values.end()) return false;
    }
  }
  return true;
}

ParameterVector uniform_prior_draw(const ParameterSpace& space, RngStream& rng) {
  ParameterVector theta(space.size());
  for (int i = 0; i < space.size(); ++i) {
    const Dim& dim = space.dims()[i];
    if (const auto* c = std::get_if<ContinuousDim>(&dim)) {
      theta[i] = rng.uniform(c->lower, c->upper);
    } else {
      const auto& d = std::get<DiscreteDim>(dim);
      theta[i] = static_cast<double>(d.values[rng.uniform_index(d.values.size())]);
    }
  }
  return theta;
}

RealSample make_real_sample(Eigen::MatrixXd values) {
  if (values.rows() < 1 || values.cols() < 1) {
    throw std::invalid_argument("RealSample: needs at least one row and one column");
  }
  return RealSample{std::move(values)};
}

EventTimes make_event_times(Eigen::VectorXd times, double horizon) {
  if (!(horizon > 0.0)) throw std::invalid_argument("EventTimes: horizon must be positive");
  for (Eigen::Index i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0 && times[i] <= horizon)) {
      throw std::invalid_argument("EventTimes: times must lie in (0, horizon]");
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw std::invalid_argument("EventTimes: times must be strictly increasing");
    }
  }
  return EventTimes{std::move(times), horizon};
}

SummaryVector make_summary(Eigen::VectorXd components, std::optional<Eigen::VectorXd> scale) {
  if (components.size() < 1) throw std::invalid_argument("SummaryVector: needs at least one component");
  if (scale) {
    if (scale->size() != components.size()) throw std::invalid_argument("SummaryVector: scale length mismatch");
    if ((scale->array() <= 0.0).any()) throw std::invalid_argument("SummaryVector: scale entries must be positive");
  }
  return SummaryVector{std::move(components), std::move(scale)};
}

}  // namespace amle
