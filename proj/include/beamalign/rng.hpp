#pragma once

#include <cstdint>
#include <random>

namespace ba {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// independent stream for trial i of a run seeded with seed
inline Rng trial_rng(std::uint64_t seed, std::uint64_t trial) {
  std::uint64_t a = splitmix64(seed ^ 0x5bd1e9955bd1e995ULL);
  std::uint64_t b = splitmix64(a + trial);
  std::seed_seq seq{static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(trial)};
  return Rng(seq);
}

inline double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

}  // namespace ba
