#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>

#include "mnl/errors.hpp"

namespace mnl {

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
}  // namespace detail

// Counter-based SplitMix64 stream. Each draw hashes (key, counter), so the
// whole state is two integers, child streams from split() never alias the
// parent, and replaying a seed reproduces every draw bit for bit.
struct Rng {
  std::uint64_t key = 0;
  std::uint64_t ctr = 0;

  static Rng seeded(std::uint64_t seed) { return Rng{detail::mix64(seed ^ detail::kGolden), 0}; }

  // Independent child stream; the parent state is not advanced.
  Rng split(std::uint64_t lane) const {
    return Rng{detail::mix64(key ^ detail::mix64(lane + detail::kGolden)), 0};
  }

  std::uint64_t next_u64() { return detail::mix64(key + detail::kGolden * ++ctr); }

  // Uniform on [0, 1), 53-bit resolution.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Uniform on {0, ..., n-1}.
  int uniform_int(int n) {
    if (n <= 0) throw ValidationError("uniform_int: n must be positive");
    return static_cast<int>(next_u64() % static_cast<std::uint64_t>(n));
  }

  // Standard Gaussian via Box-Muller; draws exactly two uniforms.
  double normal() {
    double u1 = 0.0;
    while (u1 == 0.0) u1 = next_double();
    const double u2 = next_double();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  // Index draw from an explicit probability vector (entries >= 0, sum ~ 1).
  int categorical(const Eigen::VectorXd& probs) {
    const double u = next_double();
    double acc = 0.0;
    for (int i = 0; i < probs.size(); ++i) {
      acc += probs(i);
      if (u < acc) return i;
    }
    return static_cast<int>(probs.size()) - 1;
  }
};

}  // namespace mnl
