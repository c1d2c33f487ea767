#pragma once

#include <cmath>
#include <cstdint>

namespace truncq {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so Monte Carlo trials can run in any order or in
// parallel and still produce identical results.
namespace rng {

inline std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  std::uint64_t h = mix(seed ^ 0x243f6a8885a308d3ULL);
  h = mix(h ^ stream);
  return mix(h ^ counter);
}

inline double uniform01(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  return static_cast<double>(draw(seed, stream, counter) >> 11) * 0x1.0p-53;
}

// Box-Muller from counters (2c, 2c+1) of the given stream.
inline double gaussian(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter) {
  double u1 = uniform01(seed, stream, 2 * counter);
  double u2 = uniform01(seed, stream, 2 * counter + 1);
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
}

}  // namespace rng
}  // namespace truncq
