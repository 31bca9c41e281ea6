#pragma once
// Counter-based RNG: value at (seed, stream, counter) is a pure function of
// its arguments, so parallel workers and reruns agree without shared state.
#include <cstdint>

namespace mixsys::rng {

inline uint64_t mix64(uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t at(uint64_t seed, uint64_t stream, uint64_t counter) {
  return mix64(mix64(seed ^ 0x853c49e6748fea9bULL) + mix64(stream) + counter);
}

// Uniform in [0,1) with 53 random bits.
inline double uniform(uint64_t seed, uint64_t stream, uint64_t counter) {
  return static_cast<double>(at(seed, stream, counter) >> 11) * 0x1.0p-53;
}

inline double uniform(uint64_t seed, uint64_t stream, uint64_t counter, double lo, double hi) {
  return lo + (hi - lo) * uniform(seed, stream, counter);
}

// Stateful convenience wrapper over the counter stream.
struct Stream {
  uint64_t seed;
  uint64_t stream;
  uint64_t counter = 0;
  explicit Stream(uint64_t s, uint64_t st = 0) : seed(s), stream(st) {}
  uint64_t next_u64() { return at(seed, stream, counter++); }
  double next_uniform() { return uniform(seed, stream, counter++); }
  double next_uniform(double lo, double hi) { return uniform(seed, stream, counter++, lo, hi); }
};

}  // namespace mixsys::rng
