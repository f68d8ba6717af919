#pragma once

#include <cstdint>
#include <random>

namespace sgz {

using Engine = std::mt19937_64;

/// Stream identifiers. Every realization owns independent streams keyed by
/// (seed, experiment, realization index, purpose) so results do not depend on
/// how realizations are scheduled across threads.
enum class StreamPurpose : std::uint64_t { geometry = 1, fading = 2, auxiliary = 3 };

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_key(std::uint64_t seed, std::uint64_t experiment,
                                   std::uint64_t index, StreamPurpose purpose) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ experiment);
  h = splitmix64(h ^ index);
  return splitmix64(h ^ static_cast<std::uint64_t>(purpose));
}

inline Engine make_stream(std::uint64_t seed, std::uint64_t experiment, std::uint64_t index,
                          StreamPurpose purpose) {
  return Engine(stream_key(seed, experiment, index, purpose));
}

/// Draws a unit-mean exponential (Rayleigh power fading) gain.
inline double draw_exp1(Engine& eng) {
  return std::exponential_distribution<double>(1.0)(eng);
}

}  // namespace sgz
