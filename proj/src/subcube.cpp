#include "itershadow/subcube.hpp"

#include <bit>
#include <cmath>

#include "itershadow/errors.hpp"
#include "itershadow/parallel.hpp"

namespace itershadow {

SubcubeSpec SubcubeSpec::make(int n, int dimension, SetMask bottom, SetMask free) {
  if (n < 2 || n % 2 != 0 || dimension < 0 || dimension % 2 != 0 || dimension > n) {
    throw InputError("subcube: need even n, even D with 0 <= D <= n (n=" + std::to_string(n) +
                     ", D=" + std::to_string(dimension) + ")");
  }
  if (bottom.ground() != n || free.ground() != n) throw InputError("subcube: ground size mismatch");
  if (bottom.size() != n / 2 - dimension / 2) throw InputError("subcube: |bottom| must be n/2 - D/2");
  if (free.size() != dimension) throw InputError("subcube: |free| must be D");
  if ((bottom.bits() & free.bits()) != 0) throw InputError("subcube: bottom and free overlap");
  return SubcubeSpec{n, dimension, bottom, free};
}

std::uint64_t SubcubeSpec::embed(std::uint64_t local) const {
  std::uint64_t out = bottom.bits();
  for (std::uint64_t f = free.bits(); f && local; f &= f - 1, local >>= 1) {
    if (local & 1U) out |= f & -f;
  }
  return out;
}

SubcubeSpec sample_subcube(int n, int dimension, Xoshiro256& rng) {
  if (n < 2 || n % 2 != 0 || dimension < 0 || dimension % 2 != 0 || dimension > n) {
    throw InputError("sample_subcube: need even n and even D <= n");
  }
  const std::uint64_t free = random_subset_bits(rng, n, dimension);
  const std::uint64_t bottom = random_subset_of(rng, ~free & low_bits(n), n / 2 - dimension / 2);
  return SubcubeSpec{n, dimension, SetMask(bottom, n), SetMask(free, n)};
}

void for_each_subcube(int n, int dimension, const std::function<void(const SubcubeSpec&)>& fn) {
  if (n < 2 || n % 2 != 0 || dimension < 0 || dimension % 2 != 0 || dimension > n) {
    throw InputError("for_each_subcube: need even n and even D <= n");
  }
  const int rest = n - dimension;
  const int bottom_size = n / 2 - dimension / 2;
  const std::uint64_t free_count = binom(n, dimension);
  const std::uint64_t bottom_count = binom(rest, bottom_size);
  std::uint64_t free = low_bits(dimension);
  for (std::uint64_t a = 0; a < free_count; ++a) {
    int pos[kMaxGround];
    bit_positions(~free & low_bits(n), pos);
    std::uint64_t pattern = low_bits(bottom_size);
    for (std::uint64_t b = 0; b < bottom_count; ++b) {
      std::uint64_t bottom = 0;
      for (std::uint64_t p = pattern; p; p &= p - 1) bottom |= std::uint64_t{1} << pos[std::countr_zero(p)];
      fn(SubcubeSpec{n, dimension, SetMask(bottom, n), SetMask(free, n)});
      if (b + 1 < bottom_count) pattern = next_combination(pattern);
    }
    if (a + 1 < free_count) free = next_combination(free);
  }
}

Restriction restrict_family(const LayerFamily& a, const SubcubeSpec& spec) {
  if (a.n() != spec.n || a.k() != spec.n / 2) throw InputError("restrict: family must live in the middle layer");
  const int d = spec.dimension;
  Restriction out{LayerFamily(d, d / 2), Rational(0)};
  const std::uint64_t size = out.middle.layer_size();
  std::uint64_t local = low_bits(d / 2);
  for (std::uint64_t r = 0; r < size; ++r) {
    if (a.contains_bits(spec.embed(local))) out.middle.insert(r);
    if (r + 1 < size) local = next_combination(local);
  }
  out.alpha = out.middle.measure();
  return out;
}

Rational restricted_gamma(const LayerFamily& restricted, int j) {
  const int d = restricted.n();
  if (restricted.k() * 2 != d) throw InputError("gamma: restricted family must be the middle layer of the subcube");
  if (j < 1 || 2 * j > d) throw InputError("gamma: need 1 <= j <= D/2");
  if (2 * j != d) return pair_census(restricted, j).q;
  // Antipodal pairs: each X is paired with its complement inside the subcube only.
  std::uint64_t good = 0;
  const std::uint64_t all = low_bits(d);
  restricted.for_each_member([&](std::uint64_t, std::uint64_t bits) {
    if (!restricted.contains_bits(all & ~bits)) ++good;
  });
  return Rational(BigInt(good), BigInt(restricted.layer_size()));
}

CubeFamily::CubeFamily(int dimension) : dimension_(dimension) {
  if (dimension < 0 || dimension > kMaxDimension) {
    throw CapacityError("cube family dimension " + std::to_string(dimension) + " outside [0, " +
                        std::to_string(kMaxDimension) + "]");
  }
  member_.assign(std::size_t{1} << dimension, false);
}

std::uint64_t CubeFamily::count() const {
  std::uint64_t c = 0;
  for (bool b : member_) c += b;
  return c;
}

Rational CubeFamily::measure() const { return Rational(BigInt(count()), BigInt(member_.size())); }

Rational CubeFamily::level_measure(int level) const {
  if (level < 0 || level > dimension_) return Rational(0);
  std::uint64_t hits = 0;
  for (std::uint64_t x = 0; x < member_.size(); ++x)
    if (member_[x] && std::popcount(x) == level) ++hits;
  return Rational(BigInt(hits), BigInt(binom(dimension_, level)));
}

std::vector<Rational> CubeFamily::level_measures() const {
  std::vector<std::uint64_t> hits(dimension_ + 1, 0);
  for (std::uint64_t x = 0; x < member_.size(); ++x)
    if (member_[x]) ++hits[std::popcount(x)];
  std::vector<Rational> out;
  for (int m = 0; m <= dimension_; ++m) out.emplace_back(BigInt(hits[m]), BigInt(binom(dimension_, m)));
  return out;
}

bool CubeFamily::is_up_set() const {
  for (std::uint64_t x = 0; x < member_.size(); ++x) {
    if (!member_[x]) continue;
    for (int e = 0; e < dimension_; ++e)
      if (!member_[x | (std::uint64_t{1} << e)]) return false;
  }
  return true;
}

CubeFamily CubeFamily::intersect(const CubeFamily& o) const {
  if (o.dimension_ != dimension_) throw InputError("cube family dimension mismatch");
  CubeFamily out(dimension_);
  for (std::size_t x = 0; x < member_.size(); ++x) out.member_[x] = member_[x] && o.member_[x];
  return out;
}

CubeFamily CubeFamily::truncated(int max_level) const {
  CubeFamily out(dimension_);
  for (std::size_t x = 0; x < member_.size(); ++x) out.member_[x] = member_[x] && std::popcount(x) <= max_level;
  return out;
}

CubeFamily upward_closure(int dimension, const std::vector<std::uint64_t>& seeds) {
  CubeFamily out(dimension);
  for (auto s : seeds) {
    if (s >> dimension) throw InputError("upward_closure: seed outside the cube");
    out.insert(s);
  }
  // x ∖ {e} < x numerically, so one increasing pass closes upward.
  const std::uint64_t size = std::uint64_t{1} << dimension;
  for (std::uint64_t x = 1; x < size; ++x) {
    if (out.contains(x)) continue;
    for (std::uint64_t b = x; b; b &= b - 1) {
      if (out.contains(x & ~(b & -b))) {
        out.insert(x);
        break;
      }
    }
  }
  return out;
}

CubeFamily upset_in_subcube(const LayerFamily& generators) {
  std::vector<std::uint64_t> seeds;
  generators.for_each_member([&](std::uint64_t, std::uint64_t bits) { seeds.push_back(bits); });
  return upward_closure(generators.n(), seeds);
}

HarrisCheck harris_check(const CubeFamily& u, const CubeFamily& v) {
  if (u.dimension() != v.dimension()) throw ValidationError("harris_check: cube dimensions differ");
  if (!u.is_up_set() || !v.is_up_set()) throw ValidationError("harris_check: inputs must be up-sets");
  HarrisCheck h;
  h.meet = u.intersect(v).measure();
  h.product = u.measure() * v.measure();
  h.holds = h.meet >= h.product;
  return h;
}

PipelineParams make_pipeline_params(const BoundReport& bound, std::optional<int> dimension_override) {
  PipelineParams p;
  p.n = bound.n;
  p.j = bound.j;
  p.dimension = bound.dimension;
  p.k_param = bound.k_param;
  if (dimension_override) {
    const int d = *dimension_override;
    if (d % 2 != 0 || d < 2 * bound.j || d > bound.n) {
      throw InputError("subcube dimension must be even with 2j <= D <= n (j=" + std::to_string(bound.j) + ")");
    }
    p.dimension = d;
    p.k_param = bound.epsilon * std::sqrt(static_cast<double>(bound.n) / d);
  }
  p.r = stable_ceil(p.k_param * std::sqrt(static_cast<double>(p.dimension)));
  p.ell = p.dimension / 2 + p.r;
  p.chernoff_term = std::exp(-2.0 * p.k_param * p.k_param / 3.0);
  return p;
}

RestrictionSample evaluate_restriction(const LayerFamily& a, const SubcubeSpec& spec, const PipelineParams& p) {
  RestrictionSample s;
  s.spec = spec;
  Restriction res = restrict_family(a, spec);
  s.alpha = res.alpha;
  s.gamma = restricted_gamma(res.middle, p.j);
  const CubeFamily up = upset_in_subcube(res.middle);
  const CubeFamily up_c = upset_in_subcube(res.middle.complement());
  s.upset_measure = up.measure();
  s.complement_upset_measure = up_c.measure();
  const CubeFamily meet = up.intersect(up_c);
  s.upset_meet_measure = meet.measure();
  const CubeFamily good = meet.truncated(p.ell);
  s.truncated_measure = good.measure();
  s.good_layer_measure = p.ell <= spec.dimension ? good.level_measure(p.ell) : Rational(0);
  const auto levels_a = up.level_measures();
  const auto levels_c = up_c.level_measures();
  for (int m = spec.dimension / 2; m <= spec.dimension; ++m) {
    if (levels_a[m] < s.alpha || levels_c[m] < 1 - s.alpha) s.local_lym_ok = false;
  }
  return s;
}

bool SampleInvariants::all() const {
  return gamma_below_min_alpha && alpha_variance_bound && upset_half_alpha && local_lym && harris_chain &&
         truncation && layer_lift.value_or(true) && layer_dominates.value_or(true);
}

SampleInvariants check_sample(const RestrictionSample& s, const PipelineParams& p) {
  SampleInvariants inv;
  const Rational one_minus = 1 - s.alpha;
  const Rational variance = s.alpha * one_minus;
  inv.gamma_below_min_alpha = s.gamma <= s.alpha && s.gamma <= one_minus;
  inv.alpha_variance_bound = variance >= s.gamma / 2;
  inv.upset_half_alpha = s.upset_measure >= s.alpha / 2 && s.complement_upset_measure >= one_minus / 2;
  inv.local_lym = s.local_lym_ok;
  const Rational product = s.upset_measure * s.complement_upset_measure;
  inv.harris_chain = s.upset_meet_measure >= product && product >= variance / 4 && variance / 4 >= s.gamma / 8;
  inv.truncation =
      to_double(s.truncated_measure) >= to_double(s.upset_meet_measure) - p.chernoff_term - kExpSlack;
  if (p.ell <= s.spec.dimension) {
    inv.layer_lift = to_double(s.good_layer_measure) >= to_double(s.gamma) / 8.0 - p.chernoff_term - kExpSlack;
    inv.layer_dominates = s.good_layer_measure >= s.truncated_measure;
  }
  return inv;
}

std::uint64_t sample_layer_point(const SubcubeSpec& spec, int ell, Xoshiro256& rng) {
  if (ell < 0 || ell > spec.dimension) throw InputError("sample_layer_point: level outside the subcube");
  return spec.embed(random_subset_bits(rng, spec.dimension, ell));
}

std::uint64_t PipelineSummary::total_violations() const {
  return gamma_below_min_alpha.violations + alpha_variance_bound.violations + upset_half_alpha.violations +
         local_lym.violations + harris_chain.violations + truncation.violations + layer_lift.violations +
         layer_dominates.violations;
}

namespace {

MeanEstimate estimate(const std::vector<double>& xs) {
  MeanEstimate m;
  if (xs.empty()) return m;
  // Fixed left-to-right order keeps the result independent of scheduling.
  double sum = 0.0;
  double comp = 0.0;
  for (double x : xs) {
    const double t = sum + x;
    comp += std::abs(sum) >= std::abs(x) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  m.mean = (sum + comp) / static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std_error = std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
  }
  return m;
}

void tally(InvariantTally& t, bool ok) {
  ++t.checked;
  if (!ok) ++t.violations;
}

}  // namespace

PipelineResult pipeline_estimate(const LayerFamily& a, double epsilon, const PipelineOptions& opts) {
  if (a.n() % 2 != 0 || a.k() != a.n() / 2) throw InputError("pipeline: family must live in the middle layer");
  if (a.empty() || a.count() == a.layer_size()) {
    throw InputError("pipeline: family must be nonempty and not the whole layer");
  }
  if (opts.samples == 0) throw InputError("pipeline: samples must be positive");
  PipelineResult res;
  PipelineSummary& sum = res.summary;
  sum.bound = bound_calculator(a.n(), epsilon, a.measure_double());
  sum.params = make_pipeline_params(sum.bound, opts.dimension_override);
  const PipelineParams& p = sum.params;
  if (p.j > a.k()) throw InputError("pipeline: j exceeds n/2");
  sum.samples = opts.samples;

  res.samples.resize(opts.samples);
  detail::parallel_shards(opts.samples, opts.threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Xoshiro256 rng = Xoshiro256::stream(opts.seed, i);
      res.samples[i] = evaluate_restriction(a, sample_subcube(a.n(), p.dimension, rng), p);
    }
  });

  std::vector<double> alpha, gamma, meet, layer;
  for (const auto& s : res.samples) {
    alpha.push_back(to_double(s.alpha));
    gamma.push_back(to_double(s.gamma));
    meet.push_back(to_double(s.upset_meet_measure));
    layer.push_back(to_double(s.good_layer_measure));
    const SampleInvariants inv = check_sample(s, p);
    tally(sum.gamma_below_min_alpha, inv.gamma_below_min_alpha);
    tally(sum.alpha_variance_bound, inv.alpha_variance_bound);
    tally(sum.upset_half_alpha, inv.upset_half_alpha);
    tally(sum.local_lym, inv.local_lym);
    tally(sum.harris_chain, inv.harris_chain);
    tally(sum.truncation, inv.truncation);
    if (inv.layer_lift) tally(sum.layer_lift, *inv.layer_lift);
    if (inv.layer_dominates) tally(sum.layer_dominates, *inv.layer_dominates);
    res.invariants.push_back(inv);
  }
  sum.alpha = estimate(alpha);
  sum.gamma = estimate(gamma);
  sum.upset_meet = estimate(meet);
  sum.good_layer = estimate(layer);
  sum.empirical_bound = sum.gamma.mean / 8.0 - p.chernoff_term;
  const double mu = sum.bound.mu_a;
  sum.explicit_bound = sum.bound.eta_star * mu * (1.0 - mu) / 16.0 - p.chernoff_term;
  sum.exact_q = pair_census(a, p.j, opts.threads).q;
  if (opts.compute_truth && p.r <= a.n() - a.k()) sum.exact_truth = intersection_measure(a, p.r, opts.threads);
  sum.chernoff = chernoff_tail_check(p.dimension, p.k_param);
  return res;
}

}  // namespace itershadow
