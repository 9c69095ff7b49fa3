#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "itershadow/family_spec.hpp"

namespace itershadow {

enum class Mode { kExact, kMonteCarlo };

struct ExperimentConfig {
  int n = 0;
  std::optional<int> r;          // takes precedence over epsilon
  std::optional<double> epsilon; // r = ⌈ε√n⌉ when r is absent
  FamilySpec family;
  Mode mode = Mode::kExact;
  std::uint64_t mc_samples = 100000;
  std::uint64_t seed = 1;
  int threads = 1;
  ExactCapacity cap{};

  /// Resolved shadow depth; throws InputError if neither r nor ε was given.
  int resolved_r() const;
};

struct ExactRow {
  std::string family;
  int n = 0;
  int r = 0;
  Rational mu_family;
  Rational mu_shadow;
  Rational mu_complement_shadow;
  Rational mu_intersection;
  Rational mu_union;
  bool union_is_full = false;
  /// μ(∂⁺ʳA) + μ(∂⁺ʳAᶜ) − 1 == μ(∩); only meaningful when union_is_full.
  bool sum_identity_holds = false;
};

ExactRow run_exact(const ExperimentConfig& config);

struct McRow {
  std::string family;
  int n = 0;
  int r = 0;
  std::uint64_t samples = 0;
  std::uint64_t hits = 0;
  double estimate = 0.0;
  double ci_low = 0.0;   // Wilson 95%
  double ci_high = 0.0;
  double std_error = 0.0;
};

/// Samples uniform (n/2 + r)-sets and tests membership in both iterated shadows.
/// Sample i draws from stream (seed, i); throws InputError for 0 samples and
/// CapacityError when explicit membership tests exceed the deletion cap.
McRow run_mc(const ExperimentConfig& config);

/// Wilson score interval at z = 1.96.
std::pair<double, double> wilson_interval(std::uint64_t hits, std::uint64_t samples, double z = 1.959963984540054);

struct ConjectureRow {
  std::string family;
  int n = 0;
  double epsilon = 0.0;
  int r = 0;
  Mode mode = Mode::kExact;
  std::optional<Rational> exact;
  double measure = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double ratio = 0.0;  // measure / ε
};

struct ConjectureOptions {
  std::uint64_t mc_samples = 20000;
  std::uint64_t seed = 1;
  int threads = 1;
  ExactCapacity cap{};
  bool include_dictator = true;
};

/// Half-half rows for each n ≡ 2 (mod 4) plus dictator calibration rows; exact
/// below the capacity, Monte-Carlo above it. Cells with r > n/2 are skipped.
std::vector<ConjectureRow> conjecture_table(const std::vector<int>& ns, const std::vector<double>& epsilons,
                                            const ConjectureOptions& opts = {});

struct ScalingRow {
  int n = 0;
  int r = 0;
  Rational value;
  double scaled = 0.0;  // value·√n / r
};

/// Exact μ(∂⁺ʳA ∩ ∂⁺ʳAᶜ) of the half-half family on an (n, r) grid.
std::vector<ScalingRow> half_half_scaling(const std::vector<int>& ns, const std::vector<int>& rs, int threads = 1,
                                          ExactCapacity cap = {});

}  // namespace itershadow
