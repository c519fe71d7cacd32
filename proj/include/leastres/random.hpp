#pragma once

#include <cstdint>

namespace leastres {

// Counter-based uniform stream: each draw is a pure function of
// (seed, stream, index, lane), so sample i is the same no matter how a loop
// over i is split or ordered.

inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline constexpr double counter_uniform(std::uint64_t seed, std::uint64_t stream,
                                        std::uint64_t index, std::uint64_t lane) {
  std::uint64_t z = mix64(seed ^ 0x6a09e667f3bcc909ULL);
  z = mix64(z ^ stream);
  z = mix64(z ^ index);
  z = mix64(z ^ (lane * 0xd1b54a32d192ed03ULL));
  return static_cast<double>(z >> 11) * 0x1.0p-53;
}

}  // namespace leastres
