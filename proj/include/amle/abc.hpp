#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "amle/distance.hpp"
#include "amle/kernel.hpp"
#include "amle/models.hpp"
#include "amle/types.hpp"

namespace amle {

/// Rejection-sampler configuration: tolerance, accepted-sample size, proposal
/// budget, metric and kernel family. Threads only affect wall time; accepted
/// draws are collected in proposal order, so results match a serial run.
struct AbcConfig {
  double epsilon = 0.1;
  int m_target = 10000;
  std::uint64_t max_proposals = 10'000'000;
  DistanceSpec distance;
  KernelSpec::Kind kernel = KernelSpec::Kind::kIndicator;
  int n_threads = 0;  // 0 = hardware concurrency
};

/// Accepted parameter draws with their summary distances and run diagnostics.
struct AbcSample {
  Eigen::MatrixXd draws;                         // m x dim(space), one row per accepted theta
  Eigen::VectorXd distances;                     // m
  std::vector<std::uint64_t> proposal_indices;   // originating proposal index per draw
  double epsilon = 0.0;
  std::uint64_t proposals_used = 0;
  double acceptance_rate = 0.0;
  RngSeed seed;
  Eigen::VectorXd resolved_scale;                // nonempty when a weighted metric was used
};

/// Proposal budget ran out before m_target acceptances; carries what was
/// collected so far.
class PartialSampleError : public std::runtime_error {
 public:
  PartialSampleError(const std::string& what, AbcSample partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  [[nodiscard]] const AbcSample& partial() const { return partial_; }

 private:
  AbcSample partial_;
};

/// Per-component median absolute deviations of the model statistic over
/// n_pilot prior-predictive simulations (fixed stream). Zero MADs fall back
/// to the component standard deviation, then to 1.
Eigen::VectorXd pilot_mad_scale(const ModelSpec& model, const ParameterSpace& space, int n_pilot, RngSeed seed);

/// Resolve a PilotMad distance into concrete weights (no-op otherwise).
DistanceSpec resolve_distance(const DistanceSpec& spec, const ModelSpec& model, const ParameterSpace& space,
                              RngSeed seed);

/// Plain ABC rejection: propose theta from the uniform prior, simulate,
/// accept through the kernel; returns exactly m_target draws or throws
/// PartialSampleError when the budget is exhausted.
AbcSample abc_rejection(const ModelSpec& model, const ParameterSpace& space, const SummaryVector& observed,
                        const AbcConfig& cfg, RngSeed seed);

/// One point of the simulated likelihood-curve estimate.
struct LikelihoodPoint {
  ParameterVector theta;
  double estimate = 0.0;   // acceptance fraction, an unbiased estimate of the
                           // smoothed likelihood up to the kernel constant
  double std_error = 0.0;  // binomial standard error of the fraction
};

/// Monte Carlo estimate of the smoothed likelihood over a grid of parameter
/// points (the prior plays no role here, so points outside the prior support
/// are fine as long as the model accepts them).
std::vector<LikelihoodPoint> likelihood_curve(const ModelSpec& model, const std::vector<ParameterVector>& grid,
                                              const SummaryVector& observed, double epsilon,
                                              int n_sims_per_point, RngSeed seed,
                                              const DistanceSpec& dist = {},
                                              KernelSpec::Kind kernel = KernelSpec::Kind::kIndicator,
                                              int n_threads = 0);

}  // namespace amle
