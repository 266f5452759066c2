#pragma once

#include <cstdint>

namespace flowlab {

/// splitmix64 finalizer; good avalanche, stable across platforms.
inline uint64_t mix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t seed, uint64_t key) {
  return mix64(seed ^ mix64(key));
}

/// Per-job randomness: every draw is a pure function of (seed, job, stream),
/// so replaying a reconstruction round reproduces all past draws.
struct RngPolicy {
  uint64_t seed = 0;

  uint64_t draw(uint64_t job, uint64_t stream = 0) const {
    return mix64(hash_combine(seed, job) ^ mix64(stream + 0x51ed2701ULL));
  }
  /// Uniform over {1..hi}; hi >= 1.
  int uniform_1_to(int hi, uint64_t job, uint64_t stream = 0) const {
    return static_cast<int>(draw(job, stream) % static_cast<uint64_t>(hi)) + 1;
  }
  /// Uniform over {0..hi-1}.
  int uniform_below(int hi, uint64_t job, uint64_t stream = 0) const {
    return static_cast<int>(draw(job, stream) % static_cast<uint64_t>(hi));
  }
  bool coin(uint64_t job, uint64_t stream = 0) const {
    return (draw(job, stream) & 1) != 0;
  }
};

}  // namespace flowlab
