#include "itershadow/kruskal_katona.hpp"

#include <bit>
#include <vector>

#include "itershadow/errors.hpp"

namespace itershadow {

std::strong_ordering lex_compare(const SetMask& s, const SetMask& t) {
  if (s.size() != t.size()) throw InputError("lex_compare: sets have different sizes");
  const std::uint64_t diff = s.bits() ^ t.bits();
  if (diff == 0) return std::strong_ordering::equal;
  const std::uint64_t lowest = diff & -diff;
  return (s.bits() & lowest) ? std::strong_ordering::less : std::strong_ordering::greater;
}

std::uint64_t lex_rank(const SetMask& s, int k) {
  const std::uint64_t total = binom(s.ground(), k);
  return total - 1 - rank(s.reflected(), k);
}

SetMask lex_unrank(std::uint64_t r, int n, int k) {
  const std::uint64_t total = binom(n, k);
  if (r >= total) throw InputError("lex_unrank: rank out of range");
  return unrank(total - 1 - r, n, k).reflected();
}

LayerFamily LexSegment::materialize(ExactCapacity cap) const { return lex_segment(n, k, size, cap); }

LayerFamily lex_segment(int n, int k, std::uint64_t size, ExactCapacity cap) {
  LayerFamily f(n, k, cap);
  if (size > f.layer_size()) {
    throw InputError("lex_segment: size " + std::to_string(size) + " exceeds C(n,k) = " +
                     std::to_string(f.layer_size()));
  }
  // The lex-first `size` sets are the reflections of the colex-last `size` sets.
  const std::uint64_t total = f.layer_size();
  if (size == 0) return f;
  std::uint64_t bits = unrank_bits(total - size, k);
  for (std::uint64_t r = total - size; r < total; ++r) {
    f.insert(colex_rank(SetMask(bits, n).reflected().bits()));
    if (r + 1 < total) bits = next_combination(bits);
  }
  return f;
}

bool is_lex_initial_segment(const LayerFamily& family) {
  const std::uint64_t count = family.count();
  bool ok = true;
  family.for_each_member([&](std::uint64_t, std::uint64_t bits) {
    if (ok && lex_rank(SetMask(bits, family.n()), family.k()) >= count) ok = false;
  });
  return ok;
}

ShadowClosure shadow_closure_check(int n, int k, std::uint64_t size, int r) {
  if (r < 0 || k + r > n) throw InputError("shadow_closure_check: need 0 <= r and k + r <= n");
  const LayerFamily seg = lex_segment(n, k, size);
  const LayerFamily up = iterated_upper_shadow(seg, r);
  ShadowClosure out;
  out.is_segment = is_lex_initial_segment(up);
  out.shadow_size = up.count();
  out.segment_measure = seg.measure();
  out.shadow_measure = up.measure();
  return out;
}

ClosureSweep lex_closure_sweep(int n, int k, int max_r) {
  if (k < 0 || k > n || max_r < 1) throw InputError("lex_closure_sweep: bad arguments");
  max_r = std::min(max_r, n - k);
  ExactCapacity{}.check(n);
  struct Level {
    std::vector<bool> member;
    std::uint64_t count = 0;
    std::uint64_t max_lex_plus_one = 0;
  };
  std::vector<Level> levels(max_r + 1);
  for (int d = 1; d <= max_r; ++d) levels[d].member.assign(binom(n, k + d), false);

  ClosureSweep sweep;
  const std::uint64_t total = binom(n, k);
  std::vector<std::pair<int, std::uint64_t>> stack;
  for (std::uint64_t size = 0; size <= total; ++size) {
    if (size > 0) {
      stack.emplace_back(0, lex_unrank(size - 1, n, k).bits());
      while (!stack.empty()) {
        const auto [d, bits] = stack.back();
        stack.pop_back();
        if (d == max_r) continue;
        for (std::uint64_t free = ~bits & low_bits(n); free; free &= free - 1) {
          const std::uint64_t sup = bits | (free & -free);
          Level& lv = levels[d + 1];
          const std::uint64_t cr = colex_rank(sup);
          if (lv.member[cr]) continue;
          lv.member[cr] = true;
          ++lv.count;
          const std::uint64_t lr = lex_rank(SetMask(sup, n), k + d + 1);
          lv.max_lex_plus_one = std::max(lv.max_lex_plus_one, lr + 1);
          stack.emplace_back(d + 1, sup);
        }
      }
    }
    ++sweep.sizes_checked;
    for (int d = 1; d <= max_r; ++d) {
      if (levels[d].max_lex_plus_one != levels[d].count && sweep.all_segments) {
        sweep.all_segments = false;
        sweep.first_failure_size = size;
        sweep.first_failure_r = d;
      }
    }
  }
  return sweep;
}

KKBound kk_iterated_lower_bound(int n, const Rational& measure, int r, int threads) {
  if (n < 2 || n % 2 != 0) throw InputError("kk bound requires even n");
  if (measure < 0 || measure > 1) throw InputError("kk bound: measure must lie in [0,1]");
  if (r < 0 || r > n / 2) throw InputError("kk bound: r must lie in [0, n/2]");
  const int k = n / 2;
  const std::uint64_t layer = binom(n, k);
  const Rational scaled = measure * BigInt(layer);
  const BigInt floor_size = boost::multiprecision::numerator(scaled) / boost::multiprecision::denominator(scaled);
  KKBound out;
  out.requested_measure = measure;
  out.size = floor_size.convert_to<std::uint64_t>();
  out.effective_measure = Rational(BigInt(out.size), BigInt(layer));
  const LayerFamily seg = lex_segment(n, k, out.size);
  out.bound = iterated_upper_shadow(seg, r, threads).measure();
  return out;
}

}  // namespace itershadow
