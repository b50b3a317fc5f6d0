#pragma once

#include "amle/rng.hpp"

namespace amle {

/// ABC acceptance kernel with support contained in the epsilon-ball around
/// its center (the concentration condition). Indicator accepts iff
/// dist < epsilon (strict); TruncatedGaussian accepts with probability
/// exp(-dist^2 / (2 (epsilon/3)^2)) inside the ball and never outside.
struct KernelSpec {
  enum class Kind { kIndicator, kTruncatedGaussian };

  Kind kind = Kind::kIndicator;
  double epsilon = 1.0;
};

[[nodiscard]] bool kernel_accept(const KernelSpec& spec, double dist, RngStream& rng);

/// Acceptance probability of the kernel at the given distance (1/0 for the
/// indicator); the deterministic density shape behind kernel_accept.
[[nodiscard]] double kernel_accept_probability(const KernelSpec& spec, double dist);

}  // namespace amle
