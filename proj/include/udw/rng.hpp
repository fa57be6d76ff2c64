#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>

namespace udw {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ull;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBull;
  z ^= z >> 31;
  return z;
}

// Counter-based Gaussian stream.  Every draw is a pure function of
// (seed, stream, index), so synthesis can be sharded arbitrarily across
// workers and still reproduce bit-identical records.
class GaussianStream {
 public:
  GaussianStream(std::uint64_t seed, std::uint64_t stream)
      : key_(mix64(mix64(seed + 0x9E3779B97F4A7C15ull) ^
                   (stream * 0xD2B74407B1CE6E93ull + 0x8BADF00D5DEADBEEull))) {}

  // Uniform draw in the open interval (0, 1); never 0, so logs are safe.
  double uniform(std::uint64_t index) const {
    const std::uint64_t u = mix64(key_ + index * 0x9E3779B97F4A7C15ull);
    return static_cast<double>((u >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double normal(std::uint64_t index) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Circular complex normal with E|z|^2 = 1 (Re, Im each N(0, 1/2)).
  std::complex<double> complex_normal(std::uint64_t index) const {
    const double u1 = uniform(2 * index);
    const double u2 = uniform(2 * index + 1);
    const double r = std::sqrt(-std::log(u1));
    return {r * std::cos(2.0 * std::numbers::pi * u2),
            r * std::sin(2.0 * std::numbers::pi * u2)};
  }

 private:
  std::uint64_t key_;
};

}  // namespace udw
