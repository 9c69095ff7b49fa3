#include <doctest.h>

#include <vector>

#include "itershadow/errors.hpp"
#include "itershadow/layer_family.hpp"
#include "itershadow/rng.hpp"

using namespace itershadow;

namespace {

LayerFamily random_family(int n, int k, double p, std::uint64_t seed) {
  Xoshiro256 rng(seed);
  LayerFamily f(n, k);
  for (std::uint64_t r = 0; r < f.layer_size(); ++r)
    if (rng.uniform() < p) f.insert(r);
  return f;
}

// Reference shadow: test every (k+r)-set against every member.
LayerFamily brute_shadow(const LayerFamily& a, int r) {
  LayerFamily out(a.n(), a.k() + r);
  const auto members = a.members();
  for (std::uint64_t i = 0; i < out.layer_size(); ++i) {
    const SetMask b = unrank(i, a.n(), a.k() + r);
    for (const auto& m : members) {
      if (m.is_subset_of(b)) {
        out.insert(i);
        break;
      }
    }
  }
  return out;
}

std::uint64_t brute_good_pairs(const LayerFamily& a, int j) {
  std::uint64_t good = 0;
  for (std::uint64_t x = 0; x < a.layer_size(); ++x) {
    if (!a.contains(x)) continue;
    const SetMask sx = unrank(x, a.n(), a.k());
    for (std::uint64_t y = 0; y < a.layer_size(); ++y) {
      if (a.contains(y)) continue;
      if ((sx ^ unrank(y, a.n(), a.k())).size() == 2 * j) ++good;
    }
  }
  return good;
}

}  // namespace

TEST_CASE("binomials are exact and overflow is reported") {
  CHECK(binom(6, 3) == 20);
  CHECK(binom(28, 14) == 40116600);
  CHECK(binom(5, 7) == 0);
  CHECK(binom(64, 32) == 1832624140942590534ULL);
  CHECK_THROWS_AS(checked_mul(~0ULL, 2), CapacityError);
  CHECK(binom_big(100, 50) == BigInt("100891344545564193334812497256"));
}

TEST_CASE("rational parsing and formatting") {
  CHECK(parse_rational("3/6") == Rational(1, 2));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("2") == Rational(2));
  CHECK(parse_rational("010") == Rational(10));
  CHECK(parse_rational("-0.5") == Rational(-1, 2));
  CHECK(parse_rational(".25") == Rational(1, 4));
  CHECK(parse_rational("07/014") == Rational(1, 2));
  CHECK_THROWS_AS(parse_rational("1/0"), InputError);
  CHECK_THROWS_AS(parse_rational("1."), InputError);
  CHECK_THROWS_AS(parse_rational("0x10"), InputError);
  CHECK(to_fraction_string(Rational(4, 8)) == "1/2");
  CHECK(to_fraction_string(Rational(1)) == "1");
  CHECK_THROWS_AS(parse_rational("x/2"), InputError);
}

TEST_CASE("set masks validate their bits") {
  CHECK_THROWS_AS(SetMask(0b10000, 4), InputError);
  const SetMask s = SetMask::from_elements(6, {1, 3, 6});
  CHECK(s.size() == 3);
  CHECK(s.contains(6));
  CHECK_FALSE(s.contains(2));
  CHECK(s.to_string() == "{1,3,6}");
  CHECK(s.complement().elements() == std::vector<int>{2, 4, 5});
  CHECK(s.reflected() == SetMask::from_elements(6, {1, 4, 6}));
  CHECK_THROWS_AS(SetMask::from_elements(4, {5}), InputError);
}

TEST_CASE("colex rank examples") {
  CHECK(rank(SetMask::from_elements(4, {1, 2}), 2) == 0);
  CHECK(rank(SetMask::from_elements(4, {3, 4}), 2) == 5);
  CHECK(rank(SetMask::from_elements(6, {1, 2, 3}), 3) == 0);
  CHECK(unrank(0, 4, 2) == SetMask::from_elements(4, {1, 2}));
  CHECK(unrank(5, 4, 2) == SetMask::from_elements(4, {3, 4}));
  for (int n = 1; n <= 12; ++n) {
    for (int k = 1; k <= n; ++k) {
      std::vector<int> top;
      for (int e = n - k + 1; e <= n; ++e) top.push_back(e);
      CHECK(unrank(binom(n, k) - 1, n, k) == SetMask::from_elements(n, top));
    }
  }
  CHECK_THROWS_AS(rank(SetMask::from_elements(4, {1, 2}), 3), InputError);
  CHECK_THROWS_AS(unrank(6, 4, 2), InputError);
}

TEST_CASE("rank and unrank are inverse bijections for n <= 16") {
  for (int n = 0; n <= 16; ++n) {
    for (int k = 0; k <= n; ++k) {
      std::uint64_t prev = 0;
      for (std::uint64_t r = 0; r < binom(n, k); ++r) {
        const SetMask s = unrank(r, n, k);
        REQUIRE(s.size() == k);
        REQUIRE(rank(s, k) == r);
        // colex order coincides with numeric order of the masks
        if (r > 0) REQUIRE(s.bits() > prev);
        prev = s.bits();
      }
    }
  }
}

TEST_CASE("upper shadow examples") {
  const LayerFamily single = LayerFamily::from_sets(4, 2, std::vector{SetMask::from_elements(4, {1, 2})});
  const LayerFamily s1 = upper_shadow(single);
  CHECK(s1.members() == std::vector{SetMask::from_elements(4, {1, 2, 3}), SetMask::from_elements(4, {1, 2, 4})});
  CHECK(s1.measure() == Rational(1, 2));
  CHECK(iterated_upper_shadow(single, 2).members() == std::vector{SetMask::full(4)});
  CHECK(iterated_upper_shadow(single, 0) == single);

  const LayerFamily dict = WeightPredicate::dictator(6).materialize();
  CHECK(upper_shadow(dict).measure() == Rational(2, 3));
  CHECK(upper_shadow(dict.complement()).measure() == 1);

  CHECK(upper_shadow(LayerFamily(6, 3)).empty());
  CHECK_THROWS_AS(upper_shadow(LayerFamily::full(4, 4)), LayerOverflowError);
  CHECK_THROWS_AS(iterated_upper_shadow(dict, 4), LayerOverflowError);
}

TEST_CASE("iterated shadow agrees with composition and the direct definition") {
  for (int n = 2; n <= 14; n += 2) {
    for (int k = 1; k < n; ++k) {
      const LayerFamily a = random_family(n, k, 0.03, 1000 + n * 31 + k);
      LayerFamily folded = a;
      for (int r = 0; r <= n - k; ++r) {
        if (r > 0) folded = upper_shadow(folded);
        REQUIRE(iterated_upper_shadow(a, r) == folded);
        if (n <= 10) REQUIRE(iterated_upper_shadow_direct(a, r) == folded);
      }
    }
  }
  for (int n = 4; n <= 10; n += 2) {
    const LayerFamily a = random_family(n, n / 2, 0.2, n);
    for (int r = 0; r <= n / 2; ++r) CHECK(iterated_upper_shadow(a, r) == brute_shadow(a, r));
  }
}

TEST_CASE("shadow is the same at every thread count") {
  const LayerFamily a = random_family(16, 8, 0.01, 7);
  const LayerFamily one = iterated_upper_shadow(a, 3, 1);
  for (int t : {2, 3, 8}) CHECK(iterated_upper_shadow(a, 3, t) == one);
}

TEST_CASE("shadow monotonicity and local LYM on random families") {
  for (int n = 6; n <= 14; n += 2) {
    for (int k = n / 2; k < n; ++k) {
      for (std::uint64_t seed = 0; seed < 4; ++seed) {
        const LayerFamily small = random_family(n, k, 0.05, seed * 97 + n);
        LayerFamily big = small;
        const LayerFamily extra = random_family(n, k, 0.05, seed * 89 + n + 1);
        extra.for_each_member([&](std::uint64_t r, std::uint64_t) { big.insert(r); });
        REQUIRE(upper_shadow(small).is_subset_of(upper_shadow(big)));
        REQUIRE(upper_shadow(small).measure() >= small.measure());
        REQUIRE(upper_shadow(big).measure() >= big.measure());
      }
    }
  }
}

TEST_CASE("dictator shadows have measure 1/2 + r/n") {
  for (int n = 2; n <= 20; n += 2) {
    const LayerFamily dict = WeightPredicate::dictator(n).materialize();
    for (int r = 0; r <= n / 2; ++r) REQUIRE(iterated_upper_shadow(dict, r).measure() == Rational(1, 2) + Rational(r, n));
    REQUIRE(upper_shadow(dict.complement()).measure() == 1);
  }
}

TEST_CASE("layer family measure and complement") {
  const LayerFamily a = random_family(10, 5, 0.4, 3);
  CHECK(a.measure() + a.complement().measure() == 1);
  CHECK(a.complement().complement() == a);
  CHECK(LayerFamily(6, 3).measure() == 0);
  CHECK(LayerFamily::full(6, 3).measure() == 1);
  CHECK_THROWS_AS(LayerFamily(40, 20), CapacityError);
  CHECK_THROWS_AS(LayerFamily(30, 15, ExactCapacity{40}), InputError);
}

TEST_CASE("intersection measure examples") {
  CHECK(intersection_measure(LayerFamily(8, 4), 2) == 0);
  CHECK(intersection_measure(LayerFamily::full(8, 4), 2) == 0);

  // Frozen from an independent brute-force enumeration.
  const LayerFamily hh6 = WeightPredicate::half_half(6).materialize();
  CHECK(hh6.count() == 10);
  CHECK(intersection_measure(hh6, 1) == Rational(3, 5));
  CHECK(intersection_measure(hh6, 2) == 1);
  const LayerFamily hh10 = WeightPredicate::half_half(10).materialize();
  CHECK(intersection_measure(hh10, 1) == Rational(10, 21));
  CHECK(intersection_measure(hh10, 2) == Rational(5, 6));
  const LayerFamily hh14 = WeightPredicate::half_half(14).materialize();
  CHECK(intersection_measure(hh14, 1) == Rational(175, 429));
  CHECK(intersection_measure(hh14, 2) == Rational(105, 143));

  for (int n = 4; n <= 16; n += 2) {
    const LayerFamily dict = WeightPredicate::dictator(n).materialize();
    REQUIRE(intersection_measure(dict, 1) == Rational(1, 2) + Rational(1, n));
  }

  // symmetric under A <-> complement
  const LayerFamily a = random_family(12, 6, 0.3, 11);
  for (int r = 1; r <= 3; ++r) CHECK(intersection_measure(a, r) == intersection_measure(a.complement(), r));
}

TEST_CASE("membership in an iterated shadow") {
  const LayerFamily hh6 = WeightPredicate::half_half(6).materialize();
  const SetMask b = SetMask::from_elements(6, {1, 2, 4, 5});
  CHECK(in_iterated_shadow(b, hh6, 1));
  CHECK(WeightPredicate::half_half(6).in_iterated_shadow(b, 1));
  CHECK_THROWS_AS(in_iterated_shadow(SetMask::from_elements(6, {1, 2}), hh6, 1), InputError);

  const WeightPredicate dict = WeightPredicate::dictator(8);
  for (std::uint64_t i = 0; i < binom(8, 6); ++i) {
    const SetMask s = unrank(i, 8, 6);
    CHECK(dict.in_iterated_shadow(s, 2) == s.contains(1));
  }

  // huge deletion counts are refused for explicit families
  const LayerFamily big(28, 14);
  CHECK_THROWS_AS(in_iterated_shadow(SetMask(low_bits(26), 28), big, 12, 1000), CapacityError);
}

TEST_CASE("closed-form predicate membership matches explicit enumeration") {
  const std::vector<WeightPredicate> preds{
      WeightPredicate::dictator(10), WeightPredicate::half_half(10), WeightPredicate::half_half(10).complement(),
      WeightPredicate::at_least(10, 5, SetMask::from_elements(10, {2, 4, 6, 8}), 3),
      WeightPredicate(10, 5, SetMask::from_elements(10, {1, 2, 3, 4, 5, 6}), 0b1010)};
  for (const auto& p : preds) {
    const LayerFamily a = p.materialize();
    CHECK(a.measure() == p.measure());
    for (int r = 0; r <= 5; ++r) {
      const LayerFamily shadow = iterated_upper_shadow(a, r);
      CHECK(shadow.measure() == weight_shadow_measure(p, r));
      CHECK(intersection_measure(a, r) == weight_intersection_measure(p, r));
      for (std::uint64_t i = 0; i < shadow.layer_size(); ++i) {
        REQUIRE(p.in_iterated_shadow(unrank(i, 10, 5 + r), r) == shadow.contains(i));
      }
    }
  }
  CHECK_THROWS_AS(WeightPredicate::half_half(8), InputError);
}

TEST_CASE("pair census examples") {
  const PairCensus any = pair_census(random_family(4, 2, 0.5, 1), 1);
  CHECK(any.total_pairs == 24);

  const PairCensus dict = pair_census(WeightPredicate::dictator(10).materialize(), 1);
  CHECK(dict.total_pairs == 252 * 25);
  CHECK(dict.good_pairs == 630);
  CHECK(dict.q == Rational(1, 10));

  const PairCensus hh = pair_census(WeightPredicate::half_half(10).materialize(), 1);
  CHECK(hh.good_pairs == 900);
  CHECK(hh.q == Rational(1, 7));

  CHECK(pair_census(LayerFamily::full(10, 5), 2).good_pairs == 0);
  CHECK(pair_census(LayerFamily(10, 5), 2).good_pairs == 0);
  CHECK_THROWS_AS(pair_census(LayerFamily(10, 5), 0), InputError);
  CHECK_THROWS_AS(pair_census(LayerFamily(10, 5), 6), InputError);
}

TEST_CASE("pair census matches a brute-force count") {
  for (int n = 4; n <= 10; ++n) {
    for (int k = 1; k < n; ++k) {
      const LayerFamily a = random_family(n, k, 0.4, n * 13 + k);
      for (int j = 1; j <= std::min(k, n - k); ++j) {
        const PairCensus c = pair_census(a, j);
        REQUIRE(c.total_pairs == binom(n, k) * binom(k, j) * binom(n - k, j));
        REQUIRE(c.good_pairs == brute_good_pairs(a, j));
        REQUIRE(pair_census(a, j, 3).good_pairs == c.good_pairs);
      }
    }
  }
}
