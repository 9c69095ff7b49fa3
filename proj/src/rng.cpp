#include "itershadow/rng.hpp"

#include <bit>

#include "itershadow/errors.hpp"

namespace itershadow {
namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

Xoshiro256::Xoshiro256(std::uint64_t seed) {
  std::uint64_t st = seed;
  for (auto& s : s_) s = splitmix64(st);
}

Xoshiro256 Xoshiro256::stream(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t st = seed;
  const std::uint64_t a = splitmix64(st);
  std::uint64_t st2 = index ^ 0x5851f42d4c957f2dULL;
  const std::uint64_t b = splitmix64(st2);
  return Xoshiro256(a ^ rotl(b, 17) ^ (index * 0xd1342543de82ef95ULL));
}

Xoshiro256::result_type Xoshiro256::operator()() {
  const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
  const std::uint64_t t = s_[1] << 17;
  s_[2] ^= s_[0];
  s_[3] ^= s_[1];
  s_[1] ^= s_[2];
  s_[0] ^= s_[3];
  s_[2] ^= t;
  s_[3] = rotl(s_[3], 45);
  return result;
}

std::uint64_t Xoshiro256::below(std::uint64_t bound) {
  if (bound == 0) throw InputError("Xoshiro256::below: bound must be positive");
  unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = -bound % bound;
    while (low < threshold) {
      m = static_cast<unsigned __int128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double Xoshiro256::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

std::uint64_t random_subset_bits(Xoshiro256& rng, int n, int k) {
  if (n < 0 || n > 64 || k < 0 || k > n) throw InputError("random_subset_bits: need 0 <= k <= n <= 64");
  std::uint64_t chosen = 0;
  for (int j = n - k; j < n; ++j) {
    const int t = static_cast<int>(rng.below(static_cast<std::uint64_t>(j) + 1));
    const std::uint64_t bit_t = std::uint64_t{1} << t;
    chosen |= (chosen & bit_t) ? (std::uint64_t{1} << j) : bit_t;
  }
  return chosen;
}

std::uint64_t random_subset_of(Xoshiro256& rng, std::uint64_t universe, int k) {
  int pos[64];
  int m = 0;
  for (std::uint64_t b = universe; b; b &= b - 1) pos[m++] = std::countr_zero(b);
  const std::uint64_t pick = random_subset_bits(rng, m, k);
  std::uint64_t out = 0;
  for (std::uint64_t p = pick; p; p &= p - 1) out |= std::uint64_t{1} << pos[std::countr_zero(p)];
  return out;
}

}  // namespace itershadow
