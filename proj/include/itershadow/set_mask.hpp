#pragma once

#include <bit>
#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace itershadow {

/// A subset of the ground set {1, ..., n}, element e stored at bit e-1.
class SetMask {
 public:
  SetMask() = default;
  /// Throws InputError if bits outside the low n are set or n is out of range.
  SetMask(std::uint64_t bits, int n);

  static SetMask from_elements(int n, std::span<const int> elements);
  static SetMask from_elements(int n, std::initializer_list<int> elements);
  static SetMask full(int n);
  static SetMask empty(int n) { return SetMask(0, n); }

  std::uint64_t bits() const { return bits_; }
  int ground() const { return n_; }
  int size() const { return std::popcount(bits_); }
  bool contains(int element) const;
  std::vector<int> elements() const;

  SetMask complement() const;
  SetMask operator|(const SetMask& o) const;
  SetMask operator&(const SetMask& o) const;
  SetMask operator^(const SetMask& o) const;
  SetMask minus(const SetMask& o) const;
  bool is_subset_of(const SetMask& o) const { return (bits_ & ~o.bits_) == 0; }

  /// Reflection e -> n+1-e; maps lexicographic order to reverse colex order.
  SetMask reflected() const;

  std::string to_string() const;

  bool operator==(const SetMask&) const = default;

 private:
  std::uint64_t bits_ = 0;
  int n_ = 0;
};

std::uint64_t low_bits(int n);

/// Colex rank of a k-subset: sum over sorted 0-based positions p_i of C(p_i, i+1).
/// Colex order coincides with numeric order of the bitmasks.
std::uint64_t colex_rank(std::uint64_t bits);
std::uint64_t rank(const SetMask& s, int k);
SetMask unrank(std::uint64_t r, int n, int k);
std::uint64_t unrank_bits(std::uint64_t r, int k);

/// Next larger integer with the same popcount (Gosper); the colex successor.
inline std::uint64_t next_combination(std::uint64_t v) {
  const std::uint64_t t = v | (v - 1);
  return (t + 1) | (((~t & -~t) - 1) >> (std::countr_zero(v) + 1));
}

/// Positions (0-based) of set bits, ascending.
int bit_positions(std::uint64_t bits, int* out);

}  // namespace itershadow
