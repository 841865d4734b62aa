#pragma once

#include <cmath>
#include <cstdint>

#include "qpf/core_types.hpp"

namespace qpf {

/// Deterministic counter-style generator built on the splitmix64 finalizer.
///
/// Each (seed, stream) pair gives an independent sequence, so Monte Carlo
/// code can hand stream = trajectory index to every worker and get results
/// that do not depend on scheduling or thread count. The normal variates
/// use an explicit Box-Muller transform instead of std::normal_distribution,
/// whose output is not pinned down by the standard; fixtures stay stable
/// across library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : state_(mix(seed ^ mix(stream * 0x9E3779B97F4A7C15ULL + 0xA0761D6478BD642FULL))) {}

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  /// Uniform on the open interval (0, 1).
  double uniform01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal variate.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = kTwoPi * u2;
    spare_ = r * std::sin(phi);
    has_spare_ = true;
    return r * std::cos(phi);
  }

 private:
  static std::uint64_t mix(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace qpf
