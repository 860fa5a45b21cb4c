// SPDX-License-Identifier: Apache-2.0

#ifndef SMBEAM_RNG_HPP
#define SMBEAM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "smbeam/types.hpp"

namespace smbeam {

// splitmix64 finalizer; used to decorrelate seeds.
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

// Counter-based child seed for Monte Carlo run k, so every run is
// reproducible in isolation and independent of execution order.
inline std::uint64_t child_seed(std::uint64_t master_seed, std::uint64_t run_index) {
  return mix64(master_seed + 0x9E3779B97F4A7C15ULL * (run_index + 1));
}

/// Deterministic random stream. All transforms from raw engine output are
/// spelled out here (no std::*_distribution), so a given seed produces the
/// same values on any conforming platform.
class RandomStream {
public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  // Uniform on (0, 1]; never returns 0 so it is log-safe.
  double uniform01() {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Equiprobable +1 / -1.
  double sign() { return (engine_() >> 63) ? -1.0 : 1.0; }

  // Circularly symmetric complex Gaussian with E|z|^2 = variance,
  // via one Box-Muller pair (variance/2 per real/imag part).
  Complex complex_gaussian(double variance) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-variance * std::log(u1));
    const double phi = 2.0 * 3.14159265358979323846 * u2;
    return {r * std::cos(phi), r * std::sin(phi)};
  }

  std::uint64_t raw() { return engine_(); }

private:
  std::mt19937_64 engine_;
};

} // namespace smbeam

#endif
