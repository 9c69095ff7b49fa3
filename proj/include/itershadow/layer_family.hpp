#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "itershadow/binomial.hpp"
#include "itershadow/set_mask.hpp"

namespace itershadow {

/// Size guard for materialized layer families.
struct ExactCapacity {
  static constexpr int kDefaultMaxN = 28;
  static constexpr int kHardMaxN = 34;
  int max_n = kDefaultMaxN;

  /// Throws CapacityError if n exceeds max_n, InputError if max_n exceeds the hard guard.
  void check(int n) const;
};

/// A family inside the k-th layer of the n-cube, one membership bit per colex rank.
class LayerFamily {
 public:
  LayerFamily() = default;
  LayerFamily(int n, int k, ExactCapacity cap = {});

  static LayerFamily full(int n, int k, ExactCapacity cap = {});
  static LayerFamily from_sets(int n, int k, std::span<const SetMask> sets, ExactCapacity cap = {});

  /// Materializes {S in layer k : pred(S)} where pred takes the raw bit mask.
  template <class Pred>
  static LayerFamily from_predicate(int n, int k, Pred&& pred, ExactCapacity cap = {}) {
    LayerFamily f(n, k, cap);
    std::uint64_t bits = low_bits(k);
    for (std::uint64_t r = 0; r < f.layer_size_; ++r) {
      if (pred(bits)) f.insert(r);
      if (r + 1 < f.layer_size_) bits = next_combination(bits);
    }
    return f;
  }

  int n() const { return n_; }
  int k() const { return k_; }
  std::uint64_t layer_size() const { return layer_size_; }
  std::uint64_t count() const;
  bool empty() const { return count() == 0; }

  bool contains(std::uint64_t r) const { return (words_[r >> 6] >> (r & 63)) & 1U; }
  bool contains(const SetMask& s) const;
  bool contains_bits(std::uint64_t bits) const { return contains(colex_rank(bits)); }

  void insert(std::uint64_t r) { words_[r >> 6] |= std::uint64_t{1} << (r & 63); }
  void insert(const SetMask& s);
  void erase(std::uint64_t r) { words_[r >> 6] &= ~(std::uint64_t{1} << (r & 63)); }

  Rational measure() const;
  double measure_double() const;

  /// Aᶜ within the same layer.
  LayerFamily complement() const;
  bool is_subset_of(const LayerFamily& o) const;

  std::vector<SetMask> members() const;

  /// Calls fn(rank, bits) for every member in increasing colex rank.
  template <class Fn>
  void for_each_member(Fn&& fn) const {
    for_each_member_in(0, layer_size_, fn);
  }

  /// Same as for_each_member restricted to ranks in [begin, end).
  template <class Fn>
  void for_each_member_in(std::uint64_t begin, std::uint64_t end, Fn&& fn) const {
    if (begin >= end) return;
    std::uint64_t bits = unrank_bits(begin, k_);
    for (std::uint64_t r = begin; r < end; ++r) {
      if (contains(r)) fn(r, bits);
      if (r + 1 < end) bits = next_combination(bits);
    }
  }

  std::span<const std::uint64_t> words() const { return words_; }
  std::span<std::uint64_t> mutable_words() { return words_; }

  bool operator==(const LayerFamily& o) const {
    return n_ == o.n_ && k_ == o.k_ && words_ == o.words_;
  }

 private:
  int n_ = 0;
  int k_ = 0;
  std::uint64_t layer_size_ = 0;
  ExactCapacity cap_{};
  std::vector<std::uint64_t> words_;
};

/// ∂⁺(A): all (k+1)-sets containing a member. Throws LayerOverflowError at k = n.
LayerFamily upper_shadow(const LayerFamily& a, int threads = 1);

/// ∂⁺ʳ(A) as r-fold composition of upper_shadow.
LayerFamily iterated_upper_shadow(const LayerFamily& a, int r, int threads = 1);

/// ∂⁺ʳ(A) straight from the definition: every (k+r)-set is tested for a
/// k-subset in A. Exponentially slower; used to cross-check the composition.
LayerFamily iterated_upper_shadow_direct(const LayerFamily& a, int r);

struct ShadowIntersection {
  int n = 0;
  int k = 0;
  int r = 0;
  Rational family_measure;
  Rational shadow_measure;             // μ(∂⁺ʳA)
  Rational complement_shadow_measure;  // μ(∂⁺ʳAᶜ)
  Rational intersection_measure;       // μ(∂⁺ʳA ∩ ∂⁺ʳAᶜ)
  Rational union_measure;              // μ(∂⁺ʳA ∪ ∂⁺ʳAᶜ)
};

/// Exact μ(∂⁺ʳ(A) ∩ ∂⁺ʳ(Aᶜ)) together with the pieces it is built from.
ShadowIntersection shadow_intersection(const LayerFamily& a, int r, int threads = 1);
Rational intersection_measure(const LayerFamily& a, int r, int threads = 1);

inline constexpr std::uint64_t kDefaultDeletionCap = 1'000'000;

/// True iff some k-subset of B belongs to A, where |B| = k + r. Enumerates the
/// C(k+r, r) deletion choices; throws CapacityError past `cap`.
bool in_iterated_shadow(const SetMask& b, const LayerFamily& a, int r,
                        std::uint64_t cap = kDefaultDeletionCap);

/// A layer family defined by |S ∩ T| taking one of a set of allowed values.
class WeightPredicate {
 public:
  WeightPredicate(int n, int k, SetMask reference, std::uint64_t allowed_weights);

  /// {S : e ∈ S} at layer n/2.
  static WeightPredicate dictator(int n, int element = 1);
  /// {S : |S ∩ [n/2]| > n/4} at layer n/2; requires n ≡ 2 (mod 4).
  static WeightPredicate half_half(int n);
  /// {S : |S ∩ T| ≥ threshold} at layer k.
  static WeightPredicate at_least(int n, int k, SetMask reference, int threshold);

  int n() const { return n_; }
  int k() const { return k_; }
  const SetMask& reference() const { return reference_; }
  std::uint64_t allowed_weights() const { return allowed_; }

  bool contains(std::uint64_t bits) const;
  WeightPredicate complement() const;

  /// Closed form: the k-subsets of B realise every weight between
  /// max(0, k - |B \ T|) and min(k, |B ∩ T|).
  bool in_iterated_shadow(const SetMask& b, int r) const;

  Rational measure() const;
  LayerFamily materialize(ExactCapacity cap = {}) const;

 private:
  int n_;
  int k_;
  SetMask reference_;
  std::uint64_t allowed_;
};

/// Exact μ(∂⁺ʳP ∩ ∂⁺ʳPᶜ) for a weight predicate by summing over |B ∩ T|.
/// Works at any n ≤ 64 without materializing the layer.
Rational weight_intersection_measure(const WeightPredicate& p, int r);
Rational weight_shadow_measure(const WeightPredicate& p, int r);

/// Ordered distance-(2j) pair statistics. good_pairs equals e_H(A, Aᶜ) in J(n,k,j).
struct PairCensus {
  int n = 0;
  int k = 0;
  int j = 0;
  std::uint64_t total_pairs = 0;
  std::uint64_t good_pairs = 0;
  Rational q;
};

/// Counts good pairs as |A|·deg − #{(A,B) ∈ A² : |A∩B| = k−j}, the latter solved
/// from the sums Σ_I w(I)² over t-sets I (w(I) = #members ⊇ I), t = k, …, k−j.
PairCensus pair_census(const LayerFamily& a, int j, int threads = 1);

}  // namespace itershadow
