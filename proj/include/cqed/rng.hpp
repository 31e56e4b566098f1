#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cqed {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; decorrelates nearby seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Generator for one (seed, stream, index) triple. A pure function of its
/// arguments, so parallel evaluation order never changes the draws.
inline Rng substream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const std::uint64_t a = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
  const std::uint64_t b = splitmix64(a ^ splitmix64(index));
  std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                    static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
  return Rng(seq);
}

// The draws below are written out instead of using <random> distributions so
// that output is identical across standard-library implementations.

/// Uniform on [0, 1) with 53 random bits.
inline double uniform01(Rng& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Uniform on (0, 1].
inline double uniform_open0(Rng& rng) { return 1.0 - uniform01(rng); }

/// Unit-mean exponential variate.
inline double exponential1(Rng& rng) { return -std::log(uniform_open0(rng)); }

/// Standard normal variate (Box-Muller, one value per call).
inline double standard_normal(Rng& rng) {
  const double r = std::sqrt(-2.0 * std::log(uniform_open0(rng)));
  return r * std::cos(2.0 * std::numbers::pi * uniform01(rng));
}

}  // namespace cqed
