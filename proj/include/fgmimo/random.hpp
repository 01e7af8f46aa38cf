#pragma once

#include <cstdint>
#include <random>

namespace fgmimo {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream keyed by (seed, domain, a, b). Streams for different
/// keys never depend on the order in which they are created.
inline Rng substream(std::uint64_t seed, std::uint64_t domain, std::uint64_t a = 0,
                     std::uint64_t b = 0) {
  std::uint64_t key = splitmix64(seed ^ splitmix64(domain));
  key = splitmix64(key ^ splitmix64(a + 0x632be59bd9b4e019ULL));
  key = splitmix64(key ^ splitmix64(b + 0x2545f4914f6cdd1dULL));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)};
  return Rng(seq);
}

namespace stream {
inline constexpr std::uint64_t channel = 1;
inline constexpr std::uint64_t trial = 2;
}  // namespace stream

}  // namespace fgmimo
