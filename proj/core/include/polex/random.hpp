#pragma once

#include <cstdint>
#include <random>

namespace polex {

// Seeded generator used for every random choice in evaluation runs.
//
// The stream is std::mt19937_64 seeded with the 64-bit seed (fully specified
// by the standard). Derived draws avoid the implementation-defined standard
// distributions so results match across toolchains:
//   below(n): draw x until x >= (2^64 - n) mod n, return x mod n
//   coin():   top bit of one draw (1 = allow)
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);
  bool coin() { return (next() >> 63) != 0; }

 private:
  std::mt19937_64 engine_;
};

// Independent child seed for stream `index` (splitmix64 finalizer over seed + index).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept;

}  // namespace polex
