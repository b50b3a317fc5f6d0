#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace amle {

namespace detail {

// murmur3 64-bit finalizer; bijective on uint64
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 33;
  z *= 0xFF51AFD7ED558CCDULL;
  z ^= z >> 33;
  z *= 0xC4CEB9FE1A85EC53ULL;
  z ^= z >> 33;
  return z;
}

}  // namespace detail

/// Identifies one reproducible random stream. Equal (seed, stream) pairs
/// always produce bit-identical draw sequences, independent of thread
/// scheduling, so parallel proposal evaluation stays deterministic.
struct RngSeed {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;

  /// Derive a child stream for a (purpose tag, index) pair. Children of
  /// distinct (tag, index) pairs are statistically independent streams.
  [[nodiscard]] RngSeed child(std::uint64_t tag, std::uint64_t index = 0) const {
    return RngSeed{seed, detail::mix64(stream ^ (tag * 0xA0761D6478BD642FULL)) + index};
  }
};

// Stream purpose tags used across the library when deriving child streams.
namespace stream_tag {
inline constexpr std::uint64_t kProposal = 1;
inline constexpr std::uint64_t kPilot = 2;
inline constexpr std::uint64_t kReplicate = 3;
inline constexpr std::uint64_t kCurve = 4;
inline constexpr std::uint64_t kGenerator = 5;
inline constexpr std::uint64_t kDataSearch = 6;
}  // namespace stream_tag

/// Counter-based generator (splitmix64 core). Cheap to construct, so every
/// proposal/replicate owns its own stream derived from an RngSeed.
class RngStream {
 public:
  explicit RngStream(RngSeed s) {
    state_ = detail::mix64(s.seed ^ 0x9E3779B97F4A7C15ULL);
    state_ = detail::mix64(state_ + s.stream * 0xBF58476D1CE4E5B9ULL + 0x94D049BB133111EBULL);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform on [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform strictly inside (lo, hi).
  double uniform(double lo, double hi) {
    for (;;) {
      const double v = lo + (hi - lo) * next_double();
      if (v > lo && v < hi) return v;
    }
  }

  /// Uniform over {0, 1, ..., n-1}, rejection-free of modulo bias.
  std::uint64_t uniform_index(std::uint64_t n) {
    const std::uint64_t limit = n * (UINT64_MAX / n);
    for (;;) {
      const std::uint64_t v = next_u64();
      if (v < limit) return v % n;
    }
  }

  /// Standard normal via the Marsaglia polar method (pairs cached).
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_double() - 1.0;
      v = 2.0 * next_double() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    cached_ = v * f;
    has_cached_ = true;
    return u * f;
  }

  /// Exponential with the given rate, strictly positive.
  double exponential(double rate = 1.0) {
    for (;;) {
      const double e = -std::log1p(-next_double());
      if (e > 0.0) return e / rate;
    }
  }

  /// Gamma(shape, rate) via Marsaglia-Tsang, with the shape<1 boost.
  double gamma(double shape, double rate = 1.0) {
    if (!(shape > 0.0) || !(rate > 0.0)) throw std::invalid_argument("gamma: shape and rate must be positive");
    if (shape < 1.0) {
      const double g = gamma(shape + 1.0, 1.0);
      return g * std::pow(next_double_nonzero(), 1.0 / shape) / rate;
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    for (;;) {
      double x, v;
      do {
        x = normal();
        v = 1.0 + c * x;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = next_double_nonzero();
      if (u < 1.0 - 0.0331 * (x * x) * (x * x)) return d * v / rate;
      if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v / rate;
    }
  }

  double chi_squared(double dof) { return gamma(0.5 * dof, 0.5); }

  double beta(double a, double b) {
    const double x = gamma(a, 1.0);
    const double y = gamma(b, 1.0);
    return x / (x + y);
  }

  /// Binomial(n, p) by exact pmf inversion; mode-centered walk when n*p is
  /// large so the expected work is O(sqrt(n p (1-p))) rather than O(n p).
  long binomial(long n, double p) {
    if (n < 0) throw std::invalid_argument("binomial: n must be nonnegative");
    if (p <= 0.0) return 0;
    if (p >= 1.0) return n;
    const bool flipped = p > 0.5;
    const double q = flipped ? 1.0 - p : p;
    const double np = static_cast<double>(n) * q;
    long k;
    if (np < 30.0) {
      k = binomial_walk_up(n, q);
    } else {
      k = binomial_walk_mode(n, q);
    }
    return flipped ? n - k : k;
  }

 private:
  double next_double_nonzero() {
    for (;;) {
      const double u = next_double();
      if (u > 0.0) return u;
    }
  }

  long binomial_walk_up(long n, double p) {
    const double odds = p / (1.0 - p);
    double f = std::pow(1.0 - p, static_cast<double>(n));
    double u = next_double();
    long k = 0;
    while (u >= f && k < n) {
      u -= f;
      f *= odds * static_cast<double>(n - k) / static_cast<double>(k + 1);
      ++k;
      // pmf mass exhausted by floating round-off: clamp to the tail
      if (f <= 0.0) return n;
    }
    return k;
  }

  long binomial_walk_mode(long n, double p) {
    const long mode = static_cast<long>(std::floor(static_cast<double>(n + 1) * p));
    const double logf_mode = std::lgamma(static_cast<double>(n + 1)) -
                             std::lgamma(static_cast<double>(mode + 1)) -
                             std::lgamma(static_cast<double>(n - mode + 1)) +
                             static_cast<double>(mode) * std::log(p) +
                             static_cast<double>(n - mode) * std::log1p(-p);
    const double f_mode = std::exp(logf_mode);
    const double odds = p / (1.0 - p);
    double u = next_double();
    if (u < f_mode) return mode;
    u -= f_mode;
    double f_up = f_mode, f_dn = f_mode;
    long up = mode, dn = mode;
    for (;;) {
      const bool can_up = up < n;
      const bool can_dn = dn > 0;
      if (can_up) {
        f_up *= odds * static_cast<double>(n - up) / static_cast<double>(up + 1);
        ++up;
        if (u < f_up) return up;
        u -= f_up;
      }
      if (can_dn) {
        f_dn *= static_cast<double>(dn) / (odds * static_cast<double>(n - dn + 1));
        --dn;
        if (u < f_dn) return dn;
        u -= f_dn;
      }
      if (!can_up && !can_dn) return mode;  // round-off leftover
    }
  }

  std::uint64_t state_ = 0;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace amle
