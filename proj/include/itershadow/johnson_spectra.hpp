#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "itershadow/binomial.hpp"
#include "itershadow/layer_family.hpp"

namespace itershadow {

/// Adjacency eigenvalue λ(i) of J(n, n/2, j):
///   Σ_{h=0}^{min(i,j)} (−1)^h C(i,h) C(k−i, j−h)²,  k = n/2.
BigInt eigenvalue(int n, int j, int i);

/// Degree C(n/2, j)² of J(n, n/2, j).
BigInt johnson_degree(int n, int j);

/// Spectrum of J(n, n/2, j) and of its normalized Laplacian I − A/d.
struct SpectrumReport {
  int n = 0;
  int k = 0;
  int j = 0;
  Rational eta;
  BigInt degree;
  std::vector<BigInt> lambda;
  std::vector<Rational> lambda_tilde;
  std::vector<Rational> mu_tilde;
  Rational gap;  // min_{i ≥ 1} mu_tilde(i)
  int gap_index = 0;
  bool hypothesis_met = false;  // eta ≤ 1/10
  std::optional<bool> verdict;  // gap ≥ eta/2, only when the hypothesis holds
};

SpectrumReport spectrum_report(int n, int j);

struct KoshelevCheck {
  Rational lhs;  // |λ(i)| / d
  Rational rhs;  // (1 − η/2)^i
  bool holds = false;
};

/// Exact check of |λ̃(i)| ≤ (1 − η/2)^i. Throws HypothesisError when η > 1/10.
KoshelevCheck koshelev_bound_check(int n, int j, int i);

struct CaseSplitBound {
  int case_id = 0;    // 1 iff ⌈(k−i)/2⌉ < j, else 2
  Rational bound;     // case 1: C(k−i, ⌈(k−i)/2⌉)/C(k,j); case 2: C(k−i, j)/C(k,j)
  Rational max_term;  // max_h C(k−i, j−h)/C(k,j), h = 0..min(i,j)
};

/// The intermediate bound from the two-case argument; bound ≥ max_term ≥ |λ̃(i)|.
CaseSplitBound case_split_bound(int n, int j, int i);

/// Scalar inequality used in the large-index case, in double precision:
/// returns (√2·(2η)^η, (2−η)^{1/2−2η}).
std::pair<double, double> large_index_scalar_inequality(double eta);

inline constexpr std::uint64_t kDenseOracleMaxVertices = 1000;

/// All eigenvalues of the dense adjacency matrix of J(n, n/2, j), ascending.
/// Throws CapacityError when C(n, n/2) > 1000 and InputError for j < 1.
std::vector<double> dense_spectrum_oracle(int n, int j);

/// Collapses sorted values into clusters whose neighbours differ by at most tol.
std::vector<double> distinct_values(std::vector<double> values, double tol);

/// Whether the distinct formula eigenvalues and the distinct dense eigenvalues
/// agree pairwise within rel_tol·d.
bool formula_matches_dense(int n, int j, double rel_tol = 1e-9);

struct ExpansionCheck {
  PairCensus census;
  Rational measured_q;
  Rational bound;  // (η/2) μ(A)(1 − μ(A))
  bool holds = false;
  bool hypothesis_met = false;  // A in the middle layer and η ≤ 1/10
};

/// Good-pair density against the expansion bound implied by the spectral gap.
ExpansionCheck expansion_lower_bound(const LayerFamily& a, int j, int threads = 1);

}  // namespace itershadow
