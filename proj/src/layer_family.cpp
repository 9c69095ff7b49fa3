#include "itershadow/layer_family.hpp"

#include <atomic>
#include <bit>

#include "itershadow/errors.hpp"
#include "itershadow/parallel.hpp"

namespace itershadow {

void ExactCapacity::check(int n) const {
  if (max_n > kHardMaxN) {
    throw InputError("exact capacity " + std::to_string(max_n) + " exceeds hard limit " +
                     std::to_string(kHardMaxN));
  }
  if (n > max_n) {
    throw CapacityError("n=" + std::to_string(n) + " exceeds exact-mode capacity " + std::to_string(max_n) +
                        "; use Monte-Carlo mode");
  }
}

LayerFamily::LayerFamily(int n, int k, ExactCapacity cap) : n_(n), k_(k), cap_(cap) {
  if (n < 0 || k < 0 || k > n) {
    throw InputError("layer (n=" + std::to_string(n) + ", k=" + std::to_string(k) + ") out of range");
  }
  cap.check(n);
  layer_size_ = binom(n, k);
  words_.assign((layer_size_ + 63) / 64, 0);
}

LayerFamily LayerFamily::full(int n, int k, ExactCapacity cap) {
  LayerFamily f(n, k, cap);
  for (auto& w : f.words_) w = ~std::uint64_t{0};
  if (const auto tail = f.layer_size_ % 64; tail != 0) f.words_.back() = low_bits(static_cast<int>(tail));
  return f;
}

LayerFamily LayerFamily::from_sets(int n, int k, std::span<const SetMask> sets, ExactCapacity cap) {
  LayerFamily f(n, k, cap);
  for (const auto& s : sets) f.insert(s);
  return f;
}

std::uint64_t LayerFamily::count() const {
  std::uint64_t c = 0;
  for (auto w : words_) c += std::popcount(w);
  return c;
}

bool LayerFamily::contains(const SetMask& s) const {
  if (s.ground() != n_) throw InputError("set ground size does not match family");
  return contains(rank(s, k_));
}

void LayerFamily::insert(const SetMask& s) {
  if (s.ground() != n_) throw InputError("set ground size does not match family");
  insert(rank(s, k_));
}

Rational LayerFamily::measure() const { return Rational(BigInt(count()), BigInt(layer_size_)); }

double LayerFamily::measure_double() const {
  return static_cast<double>(count()) / static_cast<double>(layer_size_);
}

LayerFamily LayerFamily::complement() const {
  LayerFamily c = *this;
  for (auto& w : c.words_) w = ~w;
  if (const auto tail = layer_size_ % 64; tail != 0) c.words_.back() &= low_bits(static_cast<int>(tail));
  return c;
}

bool LayerFamily::is_subset_of(const LayerFamily& o) const {
  if (n_ != o.n_ || k_ != o.k_) return false;
  for (std::size_t i = 0; i < words_.size(); ++i)
    if (words_[i] & ~o.words_[i]) return false;
  return true;
}

std::vector<SetMask> LayerFamily::members() const {
  std::vector<SetMask> out;
  for_each_member([&](std::uint64_t, std::uint64_t bits) { out.emplace_back(bits, n_); });
  return out;
}

namespace {

// Emits the colex rank of every (k+1)-superset of `bits` inside [n].
template <class Emit>
void for_each_superset_rank(std::uint64_t bits, int n, Emit&& emit) {
  int pos[kMaxGround];
  const int k = bit_positions(bits, pos);
  std::uint64_t shifted_suffix = 0;
  for (int i = 0; i < k; ++i) shifted_suffix += binom(pos[i], i + 2);
  std::uint64_t prefix = 0;
  int idx = 0;
  for (int x = 0; x < n; ++x) {
    if (idx < k && pos[idx] == x) {
      prefix += binom(x, idx + 1);
      shifted_suffix -= binom(x, idx + 2);
      ++idx;
      continue;
    }
    emit(prefix + binom(x, idx + 1) + shifted_suffix);
  }
}

void set_bit(std::span<std::uint64_t> words, std::uint64_t r, bool atomic) {
  const std::uint64_t m = std::uint64_t{1} << (r & 63);
  if (atomic) {
    std::atomic_ref<std::uint64_t>(words[r >> 6]).fetch_or(m, std::memory_order_relaxed);
  } else {
    words[r >> 6] |= m;
  }
}

}  // namespace

LayerFamily upper_shadow(const LayerFamily& a, int threads) {
  if (a.k() >= a.n()) {
    throw LayerOverflowError("upper shadow of layer k=" + std::to_string(a.k()) + " in n=" +
                             std::to_string(a.n()) + " would leave the cube");
  }
  LayerFamily out(a.n(), a.k() + 1, ExactCapacity{ExactCapacity::kHardMaxN});
  auto words = out.mutable_words();
  const bool atomic = threads > 1;
  const int n = a.n();
  detail::parallel_shards(a.layer_size(), threads, [&](std::uint64_t begin, std::uint64_t end) {
    a.for_each_member_in(begin, end, [&](std::uint64_t, std::uint64_t bits) {
      for_each_superset_rank(bits, n, [&](std::uint64_t r) { set_bit(words, r, atomic); });
    });
  });
  return out;
}

LayerFamily iterated_upper_shadow(const LayerFamily& a, int r, int threads) {
  if (r < 0) throw InputError("iterated shadow: r must be non-negative");
  if (a.k() + r > a.n()) {
    throw LayerOverflowError("iterated shadow: k + r = " + std::to_string(a.k() + r) + " exceeds n = " +
                             std::to_string(a.n()));
  }
  LayerFamily cur = a;
  for (int step = 0; step < r; ++step) cur = upper_shadow(cur, threads);
  return cur;
}

LayerFamily iterated_upper_shadow_direct(const LayerFamily& a, int r) {
  if (r < 0) throw InputError("iterated shadow: r must be non-negative");
  if (a.k() + r > a.n()) throw LayerOverflowError("iterated shadow: k + r exceeds n");
  const int n = a.n();
  return LayerFamily::from_predicate(
      n, a.k() + r,
      [&](std::uint64_t bits) { return in_iterated_shadow(SetMask(bits, n), a, r, ~std::uint64_t{0}); },
      ExactCapacity{ExactCapacity::kHardMaxN});
}

ShadowIntersection shadow_intersection(const LayerFamily& a, int r, int threads) {
  const LayerFamily up = iterated_upper_shadow(a, r, threads);
  const LayerFamily up_c = iterated_upper_shadow(a.complement(), r, threads);
  const auto w1 = up.words();
  const auto w2 = up_c.words();
  std::uint64_t both = 0;
  std::uint64_t either = 0;
  for (std::size_t i = 0; i < w1.size(); ++i) {
    both += std::popcount(w1[i] & w2[i]);
    either += std::popcount(w1[i] | w2[i]);
  }
  const BigInt total(up.layer_size());
  ShadowIntersection s;
  s.n = a.n();
  s.k = a.k();
  s.r = r;
  s.family_measure = a.measure();
  s.shadow_measure = up.measure();
  s.complement_shadow_measure = up_c.measure();
  s.intersection_measure = Rational(BigInt(both), total);
  s.union_measure = Rational(BigInt(either), total);
  return s;
}

Rational intersection_measure(const LayerFamily& a, int r, int threads) {
  return shadow_intersection(a, r, threads).intersection_measure;
}

bool in_iterated_shadow(const SetMask& b, const LayerFamily& a, int r, std::uint64_t cap) {
  const int k = a.k();
  if (b.ground() != a.n()) throw InputError("in_iterated_shadow: ground size mismatch");
  if (r < 0 || b.size() != k + r) {
    throw InputError("in_iterated_shadow: |B| = " + std::to_string(b.size()) + " but k + r = " +
                     std::to_string(k + r));
  }
  const std::uint64_t choices = binom(k + r, r);
  if (choices > cap) {
    throw CapacityError("in_iterated_shadow: C(" + std::to_string(k + r) + "," + std::to_string(r) + ") = " +
                        std::to_string(choices) + " deletion choices exceed cap " + std::to_string(cap) +
                        "; use a weight-predicate family");
  }
  int pos[kMaxGround];
  bit_positions(b.bits(), pos);
  // Walk k-subsets of the m positions of B, as k-bit patterns over m slots.
  std::uint64_t pattern = low_bits(k);
  for (std::uint64_t c = 0; c < choices; ++c) {
    std::uint64_t sub = 0;
    for (std::uint64_t p = pattern; p; p &= p - 1) sub |= std::uint64_t{1} << pos[std::countr_zero(p)];
    if (a.contains_bits(sub)) return true;
    if (c + 1 < choices) pattern = next_combination(pattern);
  }
  return false;
}

WeightPredicate::WeightPredicate(int n, int k, SetMask reference, std::uint64_t allowed_weights)
    : n_(n), k_(k), reference_(reference), allowed_(allowed_weights) {
  if (n < 1 || n > kMaxGround || k < 0 || k > n || k > 63) throw InputError("weight predicate: bad layer");
  if (reference.ground() != n) throw InputError("weight predicate: reference set ground size mismatch");
  allowed_ &= low_bits(k + 1);
}

WeightPredicate WeightPredicate::dictator(int n, int element) {
  if (n < 2 || n % 2 != 0) throw InputError("dictator requires even n >= 2");
  return WeightPredicate(n, n / 2, SetMask::from_elements(n, {element}), std::uint64_t{1} << 1);
}

WeightPredicate WeightPredicate::half_half(int n) {
  if (n < 2 || n % 4 != 2) {
    throw InputError("half-half family requires n congruent to 2 mod 4, got n=" + std::to_string(n));
  }
  return at_least(n, n / 2, SetMask(low_bits(n / 2), n), n / 4 + 1);
}

WeightPredicate WeightPredicate::at_least(int n, int k, SetMask reference, int threshold) {
  std::uint64_t allowed = 0;
  for (int w = std::max(threshold, 0); w <= k; ++w) allowed |= std::uint64_t{1} << w;
  return WeightPredicate(n, k, reference, allowed);
}

bool WeightPredicate::contains(std::uint64_t bits) const {
  if (std::popcount(bits) != k_) return false;
  return (allowed_ >> std::popcount(bits & reference_.bits())) & 1U;
}

WeightPredicate WeightPredicate::complement() const {
  return WeightPredicate(n_, k_, reference_, ~allowed_ & low_bits(k_ + 1));
}

bool WeightPredicate::in_iterated_shadow(const SetMask& b, int r) const {
  if (b.ground() != n_) throw InputError("in_iterated_shadow: ground size mismatch");
  if (r < 0 || b.size() != k_ + r) throw InputError("in_iterated_shadow: |B| must equal k + r");
  const int inside = std::popcount(b.bits() & reference_.bits());
  const int outside = b.size() - inside;
  const int lo = std::max(0, k_ - outside);
  const int hi = std::min(k_, inside);
  if (lo > hi) return false;
  const std::uint64_t window = low_bits(hi + 1) & ~low_bits(lo);
  return (allowed_ & window) != 0;
}

Rational WeightPredicate::measure() const {
  const int t = reference_.size();
  BigInt hits = 0;
  for (int w = 0; w <= k_; ++w)
    if ((allowed_ >> w) & 1U) hits += binom_big(t, w) * binom_big(n_ - t, k_ - w);
  return Rational(hits, binom_big(n_, k_));
}

LayerFamily WeightPredicate::materialize(ExactCapacity cap) const {
  return LayerFamily::from_predicate(
      n_, k_, [&](std::uint64_t bits) { return contains(bits); }, cap);
}

namespace {

template <class Accept>
Rational weight_layer_measure(const WeightPredicate& p, int r, Accept&& accept) {
  const int n = p.n();
  const int level = p.k() + r;
  if (r < 0 || level > n) throw LayerOverflowError("weight shadow: k + r exceeds n");
  const int t = p.reference().size();
  const WeightPredicate comp = p.complement();
  BigInt hits = 0;
  for (int w = std::max(0, level - (n - t)); w <= std::min(t, level); ++w) {
    // Any B with |B ∩ T| = w is a representative; membership depends only on w.
    std::uint64_t bits = 0;
    int placed_in = 0;
    int placed_out = 0;
    for (int e = 0; e < n; ++e) {
      const bool is_ref = (p.reference().bits() >> e) & 1U;
      if (is_ref && placed_in < w) {
        bits |= std::uint64_t{1} << e;
        ++placed_in;
      } else if (!is_ref && placed_out < level - w) {
        bits |= std::uint64_t{1} << e;
        ++placed_out;
      }
    }
    const SetMask b(bits, n);
    if (accept(p.in_iterated_shadow(b, r), comp.in_iterated_shadow(b, r))) {
      hits += binom_big(t, w) * binom_big(n - t, level - w);
    }
  }
  return Rational(hits, binom_big(n, level));
}

}  // namespace

Rational weight_intersection_measure(const WeightPredicate& p, int r) {
  return weight_layer_measure(p, r, [](bool a, bool b) { return a && b; });
}

Rational weight_shadow_measure(const WeightPredicate& p, int r) {
  return weight_layer_measure(p, r, [](bool a, bool) { return a; });
}

PairCensus pair_census(const LayerFamily& a, int j, int threads) {
  const int n = a.n();
  const int k = a.k();
  if (j < 1 || j > std::min(k, n - k)) {
    throw InputError("pair_census: j=" + std::to_string(j) + " outside [1, min(k, n-k)]");
  }
  PairCensus c;
  c.n = n;
  c.k = k;
  c.j = j;
  const std::uint64_t degree = checked_mul(binom(k, j), binom(n - k, j));
  c.total_pairs = checked_mul(a.layer_size(), degree);
  const std::uint64_t members = a.count();

  // same[m] = #ordered (A, B) ∈ A² with |A ∩ B| = k − m.
  std::vector<unsigned __int128> same(j + 1, 0);
  same[0] = members;
  for (int m = 1; m <= j; ++m) {
    const int t = k - m;
    std::vector<std::uint32_t> weight(binom(n, t), 0);
    const bool atomic = threads > 1;
    detail::parallel_shards(a.layer_size(), threads, [&](std::uint64_t begin, std::uint64_t end) {
      int pos[kMaxGround];
      a.for_each_member_in(begin, end, [&](std::uint64_t, std::uint64_t bits) {
        bit_positions(bits, pos);
        // t-subsets of the member, as t-bit patterns over its k slots.
        std::uint64_t pattern = low_bits(t);
        const std::uint64_t subsets = binom(k, t);
        for (std::uint64_t s = 0; s < subsets; ++s) {
          std::uint64_t sub = 0;
          for (std::uint64_t p = pattern; p; p &= p - 1) sub |= std::uint64_t{1} << pos[std::countr_zero(p)];
          const std::uint64_t r = colex_rank(sub);
          if (atomic) {
            std::atomic_ref<std::uint32_t>(weight[r]).fetch_add(1, std::memory_order_relaxed);
          } else {
            ++weight[r];
          }
          if (s + 1 < subsets) pattern = next_combination(pattern);
        }
      });
    });
    unsigned __int128 sum_sq = 0;
    for (std::uint32_t w : weight) sum_sq += static_cast<unsigned __int128>(w) * w;
    // sum_sq = Σ_{m' ≤ m} same[m'] · C(k − m', t)
    unsigned __int128 lower = 0;
    for (int mp = 0; mp < m; ++mp) lower += same[mp] * binom(k - mp, t);
    same[m] = sum_sq - lower;
  }
  const unsigned __int128 all_from_members = static_cast<unsigned __int128>(members) * degree;
  c.good_pairs = static_cast<std::uint64_t>(all_from_members - same[j]);
  c.q = c.total_pairs == 0 ? Rational(0) : Rational(BigInt(c.good_pairs), BigInt(c.total_pairs));
  return c;
}

}  // namespace itershadow
