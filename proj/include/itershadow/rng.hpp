#pragma once

#include <cstdint>

namespace itershadow {

/// SplitMix64 step; also used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** with SplitMix64 seeding. Streams derived from (seed, index)
/// make sample i reproducible regardless of how samples are scheduled.
class Xoshiro256 {
 public:
  using result_type = std::uint64_t;

  explicit Xoshiro256(std::uint64_t seed);

  /// Independent generator for sample `index` under master seed `seed`.
  static Xoshiro256 stream(std::uint64_t seed, std::uint64_t index);

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }
  result_type operator()();

  /// Uniform integer in [0, bound), bound > 0 (Lemire's nearly-divisionless method).
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1).
  double uniform();

 private:
  std::uint64_t s_[4];
};

/// Uniform random k-subset of {0, ..., n-1} as a bit mask (Floyd's algorithm).
std::uint64_t random_subset_bits(Xoshiro256& rng, int n, int k);

/// Uniform random k-subset of the set bits of `universe`.
std::uint64_t random_subset_of(Xoshiro256& rng, std::uint64_t universe, int k);

}  // namespace itershadow
