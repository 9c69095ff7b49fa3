#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "itershadow/bound_calculator.hpp"
#include "itershadow/layer_family.hpp"
#include "itershadow/rng.hpp"

namespace itershadow {

/// D-dimensional subcube {bottom ∪ X : X ⊆ free} of the n-cube, straddling the
/// middle layer: |bottom| = n/2 − D/2, |free| = D.
struct SubcubeSpec {
  int n = 0;
  int dimension = 0;
  SetMask bottom;
  SetMask free;

  /// Validating constructor; throws InputError on any size or overlap violation.
  static SubcubeSpec make(int n, int dimension, SetMask bottom, SetMask free);

  SetMask top() const { return bottom | free; }
  /// Global bits of bottom ∪ X for a local D-bit mask X.
  std::uint64_t embed(std::uint64_t local) const;

  bool operator==(const SubcubeSpec&) const = default;
};

/// Uniform subcube: free set uniform among C(n, D), bottom uniform among the rest.
SubcubeSpec sample_subcube(int n, int dimension, Xoshiro256& rng);

/// Calls fn(spec) for all C(n,D)·C(n−D, n/2−D/2) subcubes.
void for_each_subcube(int n, int dimension, const std::function<void(const SubcubeSpec&)>& fn);

struct Restriction {
  LayerFamily middle;  // A ∩ M(C) as a family at layer D/2 of the D-cube
  Rational alpha;
};

Restriction restrict_family(const LayerFamily& a, const SubcubeSpec& spec);

/// Share of ordered distance-(2j) pairs inside the restricted middle layer that
/// start in A and end outside it. D = 2j reduces to antipodal pairs.
Rational restricted_gamma(const LayerFamily& restricted, int j);

/// A family over all 2^D points of a D-cube, indexed by the local bit mask.
class CubeFamily {
 public:
  static constexpr int kMaxDimension = 24;

  explicit CubeFamily(int dimension);

  int dimension() const { return dimension_; }
  bool contains(std::uint64_t x) const { return member_[x]; }
  void insert(std::uint64_t x) { member_[x] = true; }
  std::uint64_t count() const;

  Rational measure() const;
  /// Density of the family inside level m of the cube.
  Rational level_measure(int level) const;
  std::vector<Rational> level_measures() const;

  bool is_up_set() const;
  CubeFamily intersect(const CubeFamily& o) const;
  /// Points of the family with at most max_level elements.
  CubeFamily truncated(int max_level) const;

 private:
  int dimension_;
  std::vector<bool> member_;
};

/// Up-set of the D-cube generated by a family living on one level of it.
CubeFamily upset_in_subcube(const LayerFamily& generators);

/// Up-set generated by arbitrary seed points.
CubeFamily upward_closure(int dimension, const std::vector<std::uint64_t>& seeds);

struct HarrisCheck {
  Rational meet;     // μ(U ∩ V)
  Rational product;  // μ(U)·μ(V)
  bool holds = false;
};

/// Throws ValidationError unless both inputs are up-sets of the same cube.
HarrisCheck harris_check(const CubeFamily& u, const CubeFamily& v);

/// Effective constants of one restriction experiment.
struct PipelineParams {
  int n = 0;
  int j = 0;
  int dimension = 0;
  double k_param = 0.0;
  int r = 0;    // ⌈K√D⌉
  int ell = 0;  // D/2 + r, the level of C_ℓ inside the subcube
  double chernoff_term = 0.0;

  bool layer_exists() const { return ell <= dimension; }
};

/// Defaults to D = 2j from the bound calculator; a larger even D may be forced,
/// in which case K = ε√(n/D) keeps K√D = ε√n.
PipelineParams make_pipeline_params(const BoundReport& bound, std::optional<int> dimension_override = {});

struct RestrictionSample {
  SubcubeSpec spec;
  Rational alpha;
  Rational gamma;
  Rational upset_measure;             // μ_C(U_C(A ∩ C))
  Rational complement_upset_measure;  // μ_C(U_C(Aᶜ ∩ C))
  Rational upset_meet_measure;        // μ_C(U_C(A∩C) ∩ U_C(Aᶜ∩C))
  Rational truncated_measure;         // μ_C(G_C)
  Rational good_layer_measure;        // μ_{C_ℓ}(G_C ∩ C_ℓ); 0 when C_ℓ is empty
  bool local_lym_ok = true;           // level densities of both up-sets ≥ α, 1−α from the middle up
};

RestrictionSample evaluate_restriction(const LayerFamily& a, const SubcubeSpec& spec, const PipelineParams& p);

/// One flag per step of the per-sample chain; layer_lift is empty when ℓ > D.
struct SampleInvariants {
  bool gamma_below_min_alpha = false;   // γ ≤ min(α, 1 − α)
  bool alpha_variance_bound = false;    // α(1 − α) ≥ γ/2
  bool upset_half_alpha = false;        // μ_C(U_A) ≥ α/2 and μ_C(U_Aᶜ) ≥ (1−α)/2
  bool local_lym = false;
  bool harris_chain = false;            // meet ≥ μ(U_A)μ(U_Aᶜ) ≥ α(1−α)/4 ≥ γ/8
  bool truncation = false;              // μ_C(G_C) ≥ meet − exp(−2K²/3)
  std::optional<bool> layer_lift;       // μ_{C_ℓ}(G_C ∩ C_ℓ) ≥ γ/8 − exp(−2K²/3)
  std::optional<bool> layer_dominates;  // μ_{C_ℓ}(G_C ∩ C_ℓ) ≥ μ_C(G_C)

  bool all() const;
};

/// Slack for comparisons that involve exp(−·) terms.
inline constexpr double kExpSlack = 1e-12;

SampleInvariants check_sample(const RestrictionSample& s, const PipelineParams& p);

/// A uniform point of level `ell` of the subcube, as a global set.
std::uint64_t sample_layer_point(const SubcubeSpec& spec, int ell, Xoshiro256& rng);

struct PipelineOptions {
  std::uint64_t samples = 1000;
  std::uint64_t seed = 1;
  int threads = 1;
  std::optional<int> dimension_override;
  bool compute_truth = true;
};

struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct InvariantTally {
  std::uint64_t checked = 0;
  std::uint64_t violations = 0;
};

struct PipelineSummary {
  BoundReport bound;
  PipelineParams params;
  std::uint64_t samples = 0;
  MeanEstimate alpha;
  MeanEstimate gamma;
  MeanEstimate upset_meet;
  MeanEstimate good_layer;
  double empirical_bound = 0.0;  // mean(γ)/8 − exp(−2K²/3)
  double explicit_bound = 0.0;   // (1/16)η μ(1−μ) − exp(−2K²/3) with the effective K
  Rational exact_q;              // pair density at distance 2j in the whole layer
  std::optional<Rational> exact_truth;  // μ(∂⁺ʳA ∩ ∂⁺ʳAᶜ)
  ChernoffCheck chernoff;
  InvariantTally gamma_below_min_alpha, alpha_variance_bound, upset_half_alpha, local_lym, harris_chain,
      truncation, layer_lift, layer_dominates;

  std::uint64_t total_violations() const;
};

struct PipelineResult {
  PipelineSummary summary;
  std::vector<RestrictionSample> samples;
  std::vector<SampleInvariants> invariants;
};

/// Runs the restriction argument on `samples` random subcubes; sample i uses
/// the stream (seed, i), so output does not depend on the thread count.
/// Throws InputError when A is empty or the full layer.
PipelineResult pipeline_estimate(const LayerFamily& a, double epsilon, const PipelineOptions& opts);

}  // namespace itershadow
