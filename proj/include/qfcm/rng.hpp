#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace qfcm {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Deterministic child seed for the stream labelled by `path` under `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = splitmix64(seed);
  for (auto p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
  return h;
}

inline Rng make_rng(std::uint64_t seed, std::initializer_list<std::uint64_t> path = {}) {
  return Rng(derive_seed(seed, path));
}

/// Stream labels used by the solvers, so that a stage's draws never depend on
/// how many draws earlier stages made.
enum class Stream : std::uint64_t {
  kInitialSample = 1,
  kBinSample = 2,
  kTwoClusterBins = 3,
  kTwoClusterNear = 4,
  kLloydInit = 5,
  kLloydReseed = 6,
  kOracleNoise = 7,
  kAnchors = 8,
  kJennrich = 9,
};

inline std::uint64_t stream_id(Stream s) { return static_cast<std::uint64_t>(s); }

}  // namespace qfcm
