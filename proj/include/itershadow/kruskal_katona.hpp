#pragma once

#include <compare>
#include <cstdint>
#include <optional>

#include "itershadow/layer_family.hpp"

namespace itershadow {

/// S < T iff the smallest element of S Δ T lies in S. Sizes must match.
std::strong_ordering lex_compare(const SetMask& s, const SetMask& t);

/// Position of a k-set in lexicographic order. Lex order is reverse colex
/// order of the reflected sets, so this is C(n,k) − 1 − colex_rank(reflect(S)).
std::uint64_t lex_rank(const SetMask& s, int k);
SetMask lex_unrank(std::uint64_t r, int n, int k);

/// The `size` lexicographically smallest k-sets of [n].
struct LexSegment {
  int n = 0;
  int k = 0;
  std::uint64_t size = 0;

  LayerFamily materialize(ExactCapacity cap = {}) const;
};

LayerFamily lex_segment(int n, int k, std::uint64_t size, ExactCapacity cap = {});

/// True iff the members are exactly the first count() sets in lex order.
bool is_lex_initial_segment(const LayerFamily& family);

struct ShadowClosure {
  bool is_segment = false;
  std::uint64_t shadow_size = 0;
  Rational segment_measure;
  Rational shadow_measure;
};

/// Whether ∂⁺ʳ of the lex segment is itself a lex initial segment of layer k+r.
ShadowClosure shadow_closure_check(int n, int k, std::uint64_t size, int r);

struct ClosureSweep {
  std::uint64_t sizes_checked = 0;
  bool all_segments = true;
  std::optional<std::uint64_t> first_failure_size;
  std::optional<int> first_failure_r;
};

/// Checks closure for every size 0..C(n,k) and every r in 1..max_r at once by
/// growing the segment one set at a time and propagating new supersets upward.
ClosureSweep lex_closure_sweep(int n, int k, int max_r);

struct KKBound {
  Rational requested_measure;
  Rational effective_measure;  // size / C(n, n/2) after rounding down
  std::uint64_t size = 0;
  Rational bound;              // μ(∂⁺ʳ(lex segment of that size))
};

/// Minimum of μ(∂⁺ʳA) over A in the middle layer with |A| = ⌊measure·C(n,n/2)⌋,
/// realized by the lex segment.
KKBound kk_iterated_lower_bound(int n, const Rational& measure, int r, int threads = 1);

}  // namespace itershadow
