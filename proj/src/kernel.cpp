#include "amle/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace amle {

double kernel_accept_probability(const KernelSpec& spec, double dist) {
  if (!(spec.epsilon > 0.0)) throw std::invalid_argument("KernelSpec: epsilon must be positive");
  if (dist < 0.0) throw std::invalid_argument("kernel: distance must be nonnegative");
  if (!(dist < spec.epsilon)) return 0.0;  // support contained in the epsilon-ball
  switch (spec.kind) {
    case KernelSpec::Kind::kIndicator:
      return 1.0;
    case KernelSpec::Kind::kTruncatedGaussian: {
      const double s = spec.epsilon / 3.0;
      return std::exp(-dist * dist / (2.0 * s * s));
    }
  }
  throw std::logic_error("kernel: unknown kind");
}

bool kernel_accept(const KernelSpec& spec, double dist, RngStream& rng) {
  const double p = kernel_accept_probability(spec, dist);
  if (p >= 1.0) return true;
  if (p <= 0.0) return false;
  return rng.next_double() < p;
}

}  // namespace amle
