#pragma once

// Counter-based random numbers. A value is a pure function of
// (seed, pixel, sample, stream, dimension), so renders do not depend on
// thread scheduling or on how many values other pixels consumed.

#include <cstdint>

#include "math.hpp"

namespace roomgt {

inline constexpr uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

inline constexpr uint64_t hash_combine(uint64_t h, uint64_t v) {
  return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2)));
}

// Uniform double in [0, 1) from the top 53 bits.
inline constexpr double to_unit(uint64_t h) {
  return double(h >> 11) * 0x1.0p-53;
}

// Per-sample random stream. Dimensions are grouped per bounce so that adding
// a dimension to one bounce never shifts the values seen by another.
class sampler {
 public:
  static constexpr int dims_per_bounce = 64;

  sampler() = default;
  sampler(uint64_t seed, uint64_t pixel, uint64_t sample, uint64_t stream = 0)
      : key_{hash_combine(
            hash_combine(hash_combine(splitmix64(seed), pixel), sample),
            stream)} {}

  // Restart the dimension counter at the first dimension of `bounce`.
  void start_bounce(int bounce) {
    bounce_ = bounce;
    dim_    = 0;
  }
  int bounce() const { return bounce_; }

  double next1() {
    auto d = uint64_t(bounce_) * dims_per_bounce + uint64_t(dim_++);
    return to_unit(hash_combine(key_, d));
  }
  vec2 next2() {
    auto a = next1();
    return {a, next1()};
  }

  // Derived independent stream, e.g. for a second estimator at the same pixel.
  sampler fork(uint64_t stream) const {
    sampler s;
    s.key_ = hash_combine(key_, 0xa5a5a5a5ull + stream);
    return s;
  }

 private:
  uint64_t key_    = 0;
  int      bounce_ = 0;
  int      dim_    = 0;
};

}  // namespace roomgt
