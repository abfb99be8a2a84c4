#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

namespace fockalg {

/// Counter-based pseudo-random source. Output n of a (seed, stream) pair is
/// a pure function of (seed, stream, n): chunked or parallel generation
/// reproduces the serial sequence bit for bit, and distinct streams are
/// decorrelated by the mixer. The mixer is the splitmix64 finalizer over a
/// Weyl sequence, which passes the standard statistical batteries.
class CounterRng {
public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(scramble(seed ^ scramble(0xD1B54A32D192ED03ULL * (stream + 1)))) {}

  std::uint64_t bits(std::uint64_t counter) const {
    return scramble(key_ + counter * 0x9E3779B97F4A7C15ULL);
  }

  /// Uniform in the open interval (0, 1); never returns an endpoint.
  double uniform(std::uint64_t counter) const {
    return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Standard normal pair via Box-Muller; consumes counters 2n and 2n+1.
  std::pair<double, double> normal_pair(std::uint64_t n) const {
    const double u1 = uniform(2 * n);
    const double u2 = uniform(2 * n + 1);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
  }

  /// Complex normal with unit second moment E|z|^2 = 1.
  std::complex<double> standard_complex(std::uint64_t n) const {
    const auto [g1, g2] = normal_pair(n);
    return {g1 * std::numbers::sqrt2 / 2.0, g2 * std::numbers::sqrt2 / 2.0};
  }

private:
  static std::uint64_t scramble(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t key_;
};

}  // namespace fockalg
