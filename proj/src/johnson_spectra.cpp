#include "itershadow/johnson_spectra.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "itershadow/errors.hpp"

namespace itershadow {
namespace {

void check_range(int n, int j) {
  if (n < 2 || n % 2 != 0) throw InputError("Johnson spectra require even n >= 2, got " + std::to_string(n));
  if (j < 1 || j > n / 2) throw InputError("j=" + std::to_string(j) + " outside [1, n/2]");
}

Rational eta_of(int n, int j) { return Rational(j, n); }

bool eta_within(int n, int j) { return Rational(j, n) <= Rational(1, 10); }

Rational pow_rational(const Rational& base, int e) {
  Rational out = 1;
  for (int i = 0; i < e; ++i) out *= base;
  return out;
}

}  // namespace

BigInt eigenvalue(int n, int j, int i) {
  check_range(n, j);
  const int k = n / 2;
  if (i < 0 || i > k) throw InputError("eigenvalue index i=" + std::to_string(i) + " outside [0, n/2]");
  BigInt sum = 0;
  for (int h = 0; h <= std::min(i, j); ++h) {
    const BigInt c = binom_big(k - i, j - h);
    const BigInt term = binom_big(i, h) * c * c;
    if (h % 2 == 0) {
      sum += term;
    } else {
      sum -= term;
    }
  }
  return sum;
}

BigInt johnson_degree(int n, int j) {
  check_range(n, j);
  const BigInt c = binom_big(n / 2, j);
  return c * c;
}

SpectrumReport spectrum_report(int n, int j) {
  check_range(n, j);
  SpectrumReport rep;
  rep.n = n;
  rep.k = n / 2;
  rep.j = j;
  rep.eta = eta_of(n, j);
  rep.degree = johnson_degree(n, j);
  for (int i = 0; i <= rep.k; ++i) {
    rep.lambda.push_back(eigenvalue(n, j, i));
    rep.lambda_tilde.emplace_back(rep.lambda.back(), rep.degree);
    rep.mu_tilde.push_back(1 - rep.lambda_tilde.back());
  }
  rep.gap = rep.mu_tilde.size() > 1 ? rep.mu_tilde[1] : Rational(0);
  rep.gap_index = 1;
  for (int i = 2; i <= rep.k; ++i) {
    if (rep.mu_tilde[i] < rep.gap) {
      rep.gap = rep.mu_tilde[i];
      rep.gap_index = i;
    }
  }
  rep.hypothesis_met = eta_within(n, j);
  if (rep.hypothesis_met) rep.verdict = rep.gap >= rep.eta / 2;
  return rep;
}

KoshelevCheck koshelev_bound_check(int n, int j, int i) {
  check_range(n, j);
  if (!eta_within(n, j)) {
    throw HypothesisError("koshelev_bound_check requires j/n <= 1/10, got " + std::to_string(j) + "/" +
                          std::to_string(n));
  }
  if (i < 1 || i > n / 2) throw InputError("koshelev_bound_check: i outside [1, n/2]");
  const BigInt lam = eigenvalue(n, j, i);
  KoshelevCheck c;
  c.lhs = Rational(boost::multiprecision::abs(lam), johnson_degree(n, j));
  c.rhs = pow_rational(Rational(2 * n - j, 2 * n), i);
  c.holds = c.lhs <= c.rhs;
  return c;
}

CaseSplitBound case_split_bound(int n, int j, int i) {
  check_range(n, j);
  if (!eta_within(n, j)) throw HypothesisError("case_split_bound requires j/n <= 1/10");
  const int k = n / 2;
  if (i < 1 || i > k) throw InputError("case_split_bound: i outside [1, n/2]");
  const int m = k - i;
  const int half_up = (m + 1) / 2;
  const BigInt denom = binom_big(k, j);
  CaseSplitBound out;
  if (half_up < j) {
    out.case_id = 1;
    out.bound = Rational(binom_big(m, half_up), denom);
  } else {
    out.case_id = 2;
    out.bound = Rational(binom_big(m, j), denom);
  }
  BigInt best = 0;
  for (int h = 0; h <= std::min(i, j); ++h) best = std::max(best, binom_big(m, j - h));
  out.max_term = Rational(best, denom);
  return out;
}

std::pair<double, double> large_index_scalar_inequality(double eta) {
  const double lhs = std::sqrt(2.0) * std::pow(2.0 * eta, eta);
  const double rhs = std::pow(2.0 - eta, 0.5 - 2.0 * eta);
  return {lhs, rhs};
}

std::vector<double> dense_spectrum_oracle(int n, int j) {
  check_range(n, j);
  const int k = n / 2;
  const std::uint64_t verts = binom(n, k);
  if (verts > kDenseOracleMaxVertices) {
    throw CapacityError("dense oracle limited to C(n,n/2) <= 1000; n=" + std::to_string(n) + " gives " +
                        std::to_string(verts));
  }
  std::vector<std::uint64_t> sets;
  sets.reserve(verts);
  std::uint64_t bits = low_bits(k);
  for (std::uint64_t r = 0; r < verts; ++r) {
    sets.push_back(bits);
    if (r + 1 < verts) bits = next_combination(bits);
  }
  const auto size = static_cast<Eigen::Index>(verts);
  Eigen::MatrixXd adj = Eigen::MatrixXd::Zero(size, size);
  for (Eigen::Index a = 0; a < size; ++a) {
    for (Eigen::Index b = a + 1; b < size; ++b) {
      if (std::popcount(sets[a] ^ sets[b]) == 2 * j) {
        adj(a, b) = 1.0;
        adj(b, a) = 1.0;
      }
    }
  }
  // The implicit QR iteration can stall on these highly degenerate spectra; a
  // multiple of the identity moves every eigenvalue by the same amount and
  // usually unsticks it.
  for (double shift : {0.0, 0.5, 1.25, 2.5}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        adj + shift * Eigen::MatrixXd::Identity(size, size), Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) continue;
    const auto& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    for (double& v : out) v -= shift;
    std::sort(out.begin(), out.end());
    return out;
  }
  throw std::runtime_error("dense eigensolver did not converge for n=" + std::to_string(n) + ", j=" + std::to_string(j));
}

std::vector<double> distinct_values(std::vector<double> values, double tol) {
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values) {
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  }
  return out;
}

bool formula_matches_dense(int n, int j, double rel_tol) {
  const double d = johnson_degree(n, j).convert_to<double>();
  const double tol = rel_tol * d;
  std::vector<double> formula;
  for (int i = 0; i <= n / 2; ++i) formula.push_back(eigenvalue(n, j, i).convert_to<double>());
  const auto a = distinct_values(formula, 0.5);  // integers: exact dedup
  const auto b = distinct_values(dense_spectrum_oracle(n, j), tol);
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

ExpansionCheck expansion_lower_bound(const LayerFamily& a, int j, int threads) {
  ExpansionCheck out;
  out.census = pair_census(a, j, threads);
  out.measured_q = out.census.q;
  const Rational mu = a.measure();
  out.bound = Rational(j, 2 * a.n()) * mu * (1 - mu);
  out.holds = out.measured_q >= out.bound;
  out.hypothesis_met = a.n() % 2 == 0 && a.k() == a.n() / 2 && Rational(j, a.n()) <= Rational(1, 10);
  return out;
}

}  // namespace itershadow
