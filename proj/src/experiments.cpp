#include "itershadow/experiments.hpp"

#include <atomic>
#include <cmath>

#include "itershadow/bound_calculator.hpp"
#include "itershadow/errors.hpp"
#include "itershadow/parallel.hpp"
#include "itershadow/rng.hpp"

namespace itershadow {

int ExperimentConfig::resolved_r() const {
  if (r) return *r;
  if (epsilon) {
    if (!(*epsilon > 0.0)) throw InputError("epsilon must be positive");
    return stable_ceil(*epsilon * std::sqrt(static_cast<double>(n)));
  }
  throw InputError("either r or epsilon must be given");
}

ExactRow run_exact(const ExperimentConfig& config) {
  const int r = config.resolved_r();
  config.cap.check(config.n);
  const FamilyHandle h = generate(config.family, config.n, GenerateOptions{true, config.cap});
  if (r < 0 || r > config.n - h.k()) throw LayerOverflowError("r must lie in [0, n/2]");
  const ShadowIntersection s = shadow_intersection(h.family(), r, config.threads);
  ExactRow row;
  row.family = config.family.to_string();
  row.n = config.n;
  row.r = r;
  row.mu_family = s.family_measure;
  row.mu_shadow = s.shadow_measure;
  row.mu_complement_shadow = s.complement_shadow_measure;
  row.mu_intersection = s.intersection_measure;
  row.mu_union = s.union_measure;
  row.union_is_full = s.union_measure == 1;
  row.sum_identity_holds = row.union_is_full && (s.shadow_measure + s.complement_shadow_measure - 1 == s.intersection_measure);
  return row;
}

std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t samples, double z) {
  if (samples == 0) return {0.0, 1.0};
  const double nn = static_cast<double>(samples);
  const double p = static_cast<double>(hits) / nn;
  const double z2 = z * z;
  const double centre = (p + z2 / (2 * nn)) / (1 + z2 / nn);
  const double half = z * std::sqrt(p * (1 - p) / nn + z2 / (4 * nn * nn)) / (1 + z2 / nn);
  const double lo = hits == 0 ? 0.0 : std::max(0.0, centre - half);
  const double hi = hits == samples ? 1.0 : std::min(1.0, centre + half);
  return {lo, hi};
}

McRow run_mc(const ExperimentConfig& config) {
  if (config.mc_samples == 0) throw InputError("Monte-Carlo mode needs at least one sample");
  const int n = config.n;
  const int r = config.resolved_r();
  const int k = n / 2;
  if (r < 0 || r > n - k) throw LayerOverflowError("r must lie in [0, n/2]");
  const bool predicate = config.family.has_predicate();
  const FamilyHandle h = generate(config.family, n, GenerateOptions{!predicate, config.cap});
  std::optional<LayerFamily> complement;
  std::optional<WeightPredicate> complement_pred;
  if (predicate) {
    complement_pred = h.predicate().complement();
  } else {
    complement = h.family().complement();
    const std::uint64_t choices = binom(k + r, r);
    if (choices > kDefaultDeletionCap) {
      throw CapacityError("explicit family needs C(" + std::to_string(k + r) + "," + std::to_string(r) +
                          ") deletion choices per sample; use a weight-predicate family");
    }
  }
  // Per-shard counts; summed in shard order.
  std::vector<std::uint64_t> hit_flags(config.mc_samples, 0);
  detail::parallel_shards(config.mc_samples, config.threads, [&](std::uint64_t begin, std::uint64_t end) {
    for (std::uint64_t i = begin; i < end; ++i) {
      Xoshiro256 rng = Xoshiro256::stream(config.seed, i);
      const SetMask b(random_subset_bits(rng, n, k + r), n);
      bool in_a = false;
      bool in_c = false;
      if (predicate) {
        in_a = h.predicate().in_iterated_shadow(b, r);
        in_c = in_a && complement_pred->in_iterated_shadow(b, r);
      } else {
        in_a = in_iterated_shadow(b, h.family(), r);
        in_c = in_a && in_iterated_shadow(b, *complement, r);
      }
      hit_flags[i] = in_a && in_c;
    }
  });
  McRow row;
  row.family = config.family.to_string();
  row.n = n;
  row.r = r;
  row.samples = config.mc_samples;
  for (auto f : hit_flags) row.hits += f;
  row.estimate = static_cast<double>(row.hits) / static_cast<double>(row.samples);
  std::tie(row.ci_low, row.ci_high) = wilson_interval(row.hits, row.samples);
  row.std_error = std::sqrt(row.estimate * (1 - row.estimate) / static_cast<double>(row.samples));
  return row;
}

std::vector<ConjectureRow> conjecture_table(const std::vector<int>& ns, const std::vector<double>& epsilons,
                                            const ConjectureOptions& opts) {
  std::vector<ConjectureRow> rows;
  for (int n : ns) {
    if (n < 2 || n % 2 != 0) throw InputError("conjecture table: n must be even, got " + std::to_string(n));
    std::vector<FamilySpec> families;
    if (n % 4 == 2) families.push_back(FamilySpec::parse("half-half"));
    if (opts.include_dictator) families.push_back(FamilySpec::parse("dictator"));
    for (double eps : epsilons) {
      for (const auto& fam : families) {
        ExperimentConfig cfg;
        cfg.n = n;
        cfg.epsilon = eps;
        cfg.family = fam;
        cfg.mc_samples = opts.mc_samples;
        cfg.seed = opts.seed;
        cfg.threads = opts.threads;
        cfg.cap = opts.cap;
        const int r = cfg.resolved_r();
        if (r > n / 2) continue;
        ConjectureRow row;
        row.family = fam.to_string();
        row.n = n;
        row.epsilon = eps;
        row.r = r;
        if (n <= opts.cap.max_n) {
          const ExactRow ex = run_exact(cfg);
          row.mode = Mode::kExact;
          row.exact = ex.mu_intersection;
          row.measure = to_double(ex.mu_intersection);
          row.ci_low = row.ci_high = row.measure;
        } else {
          cfg.mode = Mode::kMonteCarlo;
          const McRow mc = run_mc(cfg);
          row.mode = Mode::kMonteCarlo;
          row.measure = mc.estimate;
          row.ci_low = mc.ci_low;
          row.ci_high = mc.ci_high;
        }
        row.ratio = row.measure / eps;
        rows.push_back(row);
      }
    }
  }
  return rows;
}

std::vector<ScalingRow> half_half_scaling(const std::vector<int>& ns, const std::vector<int>& rs, int threads,
                                          ExactCapacity cap) {
  std::vector<ScalingRow> rows;
  for (int n : ns) {
    const LayerFamily a = WeightPredicate::half_half(n).materialize(cap);
    for (int r : rs) {
      ScalingRow row;
      row.n = n;
      row.r = r;
      row.value = intersection_measure(a, r, threads);
      row.scaled = to_double(row.value) * std::sqrt(static_cast<double>(n)) / r;
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace itershadow
