#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <string_view>

namespace siht {

// Deterministic seeded randomness. The generator is std::mt19937_64, whose
// output sequence is fully specified by the C++ standard, so golden draws
// recorded in tests are portable across platforms and standard libraries.
//
// Distribution code (bounded integers, normals) is implemented here rather
// than with std::*_distribution, which is implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed), seed_(seed) {}

  // Derives an independent labeled sub-stream. The sub-seed is
  // splitmix64(seed ^ fnv1a64(label)), so streams with distinct labels are
  // decorrelated and the derivation is reproducible from (seed, label).
  Rng substream(std::string_view label) const;

  std::uint64_t next_u64() { return gen_(); }

  // Uniform integer in [0, bound) by rejection sampling (unbiased).
  std::uint64_t uniform_below(std::uint64_t bound);

  // Uniform real in (0, 1].
  double uniform01();

  // Standard normal via Box-Muller (both values used, cached).
  double normal();

  std::uint64_t seed() const { return seed_; }

  static std::uint64_t splitmix64(std::uint64_t x);
  static std::uint64_t fnv1a64(std::string_view s);

 private:
  std::mt19937_64 gen_;
  std::uint64_t seed_ = 0;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace siht
