#pragma once

// Random streams used by every randomized routine.
//
// Generator: std::mt19937_64, whose output sequence is fixed by the C++
// standard. A user seed s is first scrambled with splitmix64 and the result
// is passed to the engine's single-integer constructor. Bounded integers and
// unit doubles are produced here rather than through <random> distributions,
// whose algorithms are implementation-defined.

#include <cstdint>
#include <random>

namespace qalv::rng {

using Engine = std::mt19937_64;

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Independent stream seed for (base, a, b), e.g. (seed, gamma index, replicate).
constexpr std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t h = splitmix64(base);
  h = splitmix64(h ^ splitmix64(a + 0x632be59bd9b4e019ULL));
  h = splitmix64(h ^ splitmix64(b + 0x85157af5ULL));
  return h;
}

inline Engine make_engine(std::uint64_t seed) { return Engine(splitmix64(seed)); }

/// Uniform double in [0, 1) from the top 53 bits.
inline double uniform01(Engine& e) { return static_cast<double>(e() >> 11) * 0x1.0p-53; }

/// Uniform integer in [0, n) by rejection; unbiased, n > 0.
inline std::uint64_t uniform_index(Engine& e, std::uint64_t n) {
  // Values below 2^64 mod n would bias the low residues.
  const std::uint64_t threshold = (std::uint64_t{0} - n) % n;
  std::uint64_t x;
  do {
    x = e();
  } while (x < threshold);
  return x % n;
}

}  // namespace qalv::rng
