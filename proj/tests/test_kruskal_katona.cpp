#include <doctest.h>

#include <algorithm>
#include <vector>

#include "itershadow/errors.hpp"
#include "itershadow/kruskal_katona.hpp"
#include "itershadow/rng.hpp"

using namespace itershadow;

namespace {

// All k-sets sorted with the lexicographic comparator, as an independent oracle.
std::vector<SetMask> lex_sorted(int n, int k) {
  std::vector<SetMask> all;
  for (std::uint64_t r = 0; r < binom(n, k); ++r) all.push_back(unrank(r, n, k));
  std::sort(all.begin(), all.end(), [](const SetMask& a, const SetMask& b) {
    return a.elements() < b.elements();
  });
  return all;
}

}  // namespace

TEST_CASE("lex comparison examples") {
  const auto s = [](std::initializer_list<int> e) { return SetMask::from_elements(6, e); };
  CHECK(lex_compare(s({1, 2}), s({1, 3})) == std::strong_ordering::less);
  CHECK(lex_compare(s({1, 4}), s({2, 3})) == std::strong_ordering::less);
  CHECK(lex_compare(s({2, 3}), s({1, 4})) == std::strong_ordering::greater);
  CHECK(lex_compare(s({2, 5}), s({2, 5})) == std::strong_ordering::equal);
  CHECK_THROWS_AS((void)lex_compare(s({1}), s({1, 2})), InputError);
}

TEST_CASE("lex rank agrees with sorting element lists") {
  for (int n = 1; n <= 10; ++n) {
    for (int k = 0; k <= n; ++k) {
      const auto sorted = lex_sorted(n, k);
      for (std::uint64_t i = 0; i < sorted.size(); ++i) {
        REQUIRE(lex_rank(sorted[i], k) == i);
        REQUIRE(lex_unrank(i, n, k) == sorted[i]);
        if (i > 0) REQUIRE(lex_compare(sorted[i - 1], sorted[i]) == std::strong_ordering::less);
      }
    }
  }
}

TEST_CASE("lex segment examples") {
  CHECK(lex_segment(6, 3, 0).empty());
  const LayerFamily seg = lex_segment(4, 2, 3);
  CHECK(seg.members() == std::vector{SetMask::from_elements(4, {1, 2}), SetMask::from_elements(4, {1, 3}),
                                     SetMask::from_elements(4, {1, 4})});
  for (int n = 2; n <= 14; n += 2) {
    CHECK(lex_segment(n, n / 2, binom(n - 1, n / 2 - 1)) == WeightPredicate::dictator(n).materialize());
  }
  CHECK_THROWS_AS(lex_segment(4, 2, 7), InputError);
  CHECK(LexSegment{6, 3, 4}.materialize() == lex_segment(6, 3, 4));
}

TEST_CASE("lex segments are nested and recognised") {
  for (int n = 4; n <= 10; ++n) {
    const int k = n / 2;
    LayerFamily prev(n, k);
    for (std::uint64_t size = 0; size <= binom(n, k); ++size) {
      const LayerFamily seg = lex_segment(n, k, size);
      REQUIRE(seg.count() == size);
      REQUIRE(prev.is_subset_of(seg));
      REQUIRE(is_lex_initial_segment(seg));
      prev = seg;
    }
  }
  LayerFamily gap(6, 3);
  gap.insert(lex_unrank(1, 6, 3));
  CHECK_FALSE(is_lex_initial_segment(gap));
}

TEST_CASE("shadow closure check examples") {
  for (std::uint64_t size = 0; size <= binom(12, 6); size += 37) {
    for (int r = 1; r <= 3; ++r) CHECK(shadow_closure_check(12, 6, size, r).is_segment);
  }
  const ShadowClosure full = shadow_closure_check(10, 5, binom(10, 5), 2);
  CHECK(full.is_segment);
  CHECK(full.shadow_measure == 1);
  for (int r = 1; r <= 3; ++r) {
    const ShadowClosure d = shadow_closure_check(12, 6, binom(11, 5), r);
    CHECK(d.is_segment);
    CHECK(d.shadow_size == binom(11, 6 + r - 1));
  }
  CHECK_THROWS_AS(shadow_closure_check(6, 3, 1, 4), InputError);
}

TEST_CASE("incremental sweep agrees with per-size checks") {
  for (int n = 4; n <= 9; ++n) {
    for (int k = 1; k < n; ++k) {
      const ClosureSweep sweep = lex_closure_sweep(n, k, 3);
      CHECK(sweep.all_segments);
      CHECK(sweep.sizes_checked == binom(n, k) + 1);
      for (std::uint64_t size = 0; size <= binom(n, k); ++size) {
        for (int r = 1; r <= std::min(3, n - k); ++r) REQUIRE(shadow_closure_check(n, k, size, r).is_segment);
      }
    }
  }
}

TEST_CASE("iterated lower bound") {
  for (int n = 2; n <= 20; n += 2) {
    for (int r = 0; r <= n / 2; ++r) {
      REQUIRE(kk_iterated_lower_bound(n, Rational(1, 2), r).bound == Rational(1, 2) + Rational(r, n));
    }
    CHECK(kk_iterated_lower_bound(n, Rational(1), 1).bound == 1);
  }
  // one set at n=8: C(4, r) supersets out of C(8, 4 + r)
  for (int r = 0; r <= 4; ++r) {
    const KKBound b = kk_iterated_lower_bound(8, Rational(1, 70), r);
    CHECK(b.size == 1);
    CHECK(b.bound == Rational(binom(4, r), binom(8, 4 + r)));
  }
  // 0.3 of C(8,4)=70 sets is 21
  const KKBound rounded = kk_iterated_lower_bound(8, Rational(3, 10), 1);
  CHECK(rounded.size == 21);
  CHECK(rounded.effective_measure == Rational(21, 70));
  const KKBound down = kk_iterated_lower_bound(8, Rational(1, 100), 1);
  CHECK(down.size == 0);
  CHECK(down.bound == 0);
  CHECK_THROWS_AS(kk_iterated_lower_bound(8, Rational(3, 2), 1), InputError);
  CHECK_THROWS_AS(kk_iterated_lower_bound(7, Rational(1, 2), 1), InputError);
}

TEST_CASE("no random family beats the lex segment of the same size") {
  Xoshiro256 rng(2024);
  for (int n = 6; n <= 12; n += 2) {
    const int k = n / 2;
    for (int trial = 0; trial < 25; ++trial) {
      const std::uint64_t size = 1 + rng.below(binom(n, k));
      LayerFamily a(n, k);
      while (a.count() < size) a.insert(rng.below(binom(n, k)));
      const LayerFamily seg = lex_segment(n, k, size);
      for (int r = 1; r <= 3; ++r) REQUIRE(iterated_upper_shadow(a, r).count() >= iterated_upper_shadow(seg, r).count());
    }
  }
  // exhaustive for tiny families at n=6
  const std::uint64_t total = binom(6, 3);
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << total); mask += 7) {
    LayerFamily a(6, 3);
    for (std::uint64_t r = 0; r < total; ++r)
      if ((mask >> r) & 1U) a.insert(r);
    const LayerFamily seg = lex_segment(6, 3, a.count());
    REQUIRE(upper_shadow(a).count() >= upper_shadow(seg).count());
  }
}
