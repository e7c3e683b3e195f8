#pragma once

#include <cstdint>

namespace hctree {

// SplitMix64 (Steele, Lea, Flood 2014): a Weyl counter stepped by the golden
// gamma and pushed through a 64-bit finalizer. Output is a pure function of
// (seed, draw index), so streams are bit-reproducible on every platform.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // uniform on [0,1) with 53 random bits
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace hctree
