#pragma once

#include <cstdint>
#include <random>

namespace collabpac {

// Deterministic seeded stream. All randomness in the library flows through
// this wrapper so that a run is reproducible bit-for-bit given its seed.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(scramble(seed)) {}

  std::uint64_t next_u64() { return gen_(); }

  // Uniform double in [0, 1) with 53 random bits.
  double next_unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [0, n), n >= 1.
  std::uint64_t next_below(std::uint64_t n) {
    auto v = static_cast<std::uint64_t>(next_unit() * static_cast<double>(n));
    return v < n ? v : n - 1;
  }

 private:
  // splitmix64 finisher; trials are seeded base_seed + index and raw
  // mt19937_64 states from adjacent integer seeds start out correlated.
  static std::uint64_t scramble(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::mt19937_64 gen_;
};

}  // namespace collabpac
