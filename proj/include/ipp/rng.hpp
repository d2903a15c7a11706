#pragma once

#include <cstdint>
#include <random>

namespace ipp {

inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) { return splitmix64(splitmix64(a) ^ b); }
inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
  return splitmix64(mix_seed(a, b) ^ c);
}

using Rng = std::mt19937_64;

// Independent substream keyed by (seed, stream ids). Results never depend on
// how many workers evaluate the streams or in which order.
inline Rng substream(uint64_t seed, uint64_t s0, uint64_t s1 = 0) {
  return Rng(mix_seed(seed, s0, s1));
}

inline std::size_t uniform_index(Rng& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

inline bool coin(Rng& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

}  // namespace ipp
