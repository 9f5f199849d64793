#pragma once

#include <cstdint>
#include <random>

namespace qkdsec {

// SplitMix64 finalizer (Steele, Lea, Flood). Used only to derive independent
// per-batch seeds from a root seed.
inline std::uint64_t splitmix64_mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed of stream `index` under `root`. Depends only on (root, index), so a
/// batch draws the same numbers whichever thread runs it.
inline std::uint64_t stream_seed(std::uint64_t root, std::uint64_t index) {
  return splitmix64_mix(root + (index + 1) * 0x9e3779b97f4a7c15ULL);
}

/// Engine whose output sequence is fixed by the standard, for bitwise reproducibility.
using StreamEngine = std::mt19937_64;

inline StreamEngine make_stream(std::uint64_t root, std::uint64_t index) {
  return StreamEngine(stream_seed(root, index));
}

/// Uniform double in [0,1) from the top 53 bits.
inline double uniform01(StreamEngine& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

}  // namespace qkdsec
