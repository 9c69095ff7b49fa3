#include "itershadow/bound_calculator.hpp"

#include <cmath>

#include "itershadow/errors.hpp"

namespace itershadow {
namespace {

constexpr double kEtaMin = 1e-6;
constexpr double kEtaMax = 1.0 / 20.0;
constexpr int kScanPoints = 1000;
constexpr double kRootTol = 1e-12;

double objective(double eta, double epsilon, double mu) {
  return eta * mu * (1.0 - mu) / 32.0 - std::exp(-epsilon * epsilon / (3.0 * eta));
}

}  // namespace

int stable_ceil(double x) { return static_cast<int>(std::ceil(x - 1e-9)); }

double solve_eta(double epsilon, double mu_a) {
  const double ratio = std::pow(kEtaMax / kEtaMin, 1.0 / (kScanPoints - 1));
  double lo = kEtaMin;
  double f_lo = objective(lo, epsilon, mu_a);
  double hi = 0.0;
  bool bracketed = false;
  for (int i = 1; i < kScanPoints; ++i) {
    const double x = i == kScanPoints - 1 ? kEtaMax : kEtaMin * std::pow(ratio, i);
    const double fx = objective(x, epsilon, mu_a);
    if ((f_lo > 0) != (fx > 0)) {
      hi = x;
      bracketed = true;
      break;
    }
    lo = x;
    f_lo = fx;
  }
  if (!bracketed) {
    throw InfeasibleError("no sign change of (1/32)eta*mu(1-mu) - exp(-eps^2/(3 eta)) in (0, 1/20] for eps=" +
                          std::to_string(epsilon) + ", mu=" + std::to_string(mu_a));
  }
  while (hi - lo > kRootTol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = objective(mid, epsilon, mu_a);
    if ((fm > 0) == (f_lo > 0)) {
      lo = mid;
      f_lo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

BoundReport bound_calculator(int n, double epsilon, double mu_a) {
  if (n < 2 || n % 2 != 0) throw InputError("bound_calculator: n must be even and >= 2");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InputError("bound_calculator: epsilon must lie in (0,1)");
  if (!(mu_a > 0.0 && mu_a < 1.0)) throw InputError("bound_calculator: mu(A) must lie in (0,1)");
  BoundReport b;
  b.n = n;
  b.epsilon = epsilon;
  b.mu_a = mu_a;
  b.eta_star = solve_eta(epsilon, mu_a);
  b.root_residual = objective(b.eta_star, epsilon, mu_a);
  b.j = std::max(1, stable_ceil(b.eta_star * n));
  b.dimension = 2 * b.j;
  b.k_param = std::sqrt(epsilon * epsilon * n / (2.0 * b.j));
  b.r = stable_ceil(b.k_param * std::sqrt(static_cast<double>(b.dimension)));
  b.r_epsilon = stable_ceil(epsilon * std::sqrt(static_cast<double>(n)));
  b.chernoff_term = std::exp(-2.0 * b.k_param * b.k_param / 3.0);
  b.explicit_bound = b.eta_star * mu_a * (1.0 - mu_a) / 16.0 - b.chernoff_term;
  b.precondition_ok = b.eta_star * n >= 0.5;
  return b;
}

Rational binomial_upper_tail(int dimension, int t) {
  if (dimension < 0) throw InputError("binomial_upper_tail: negative dimension");
  BigInt count = 0;
  for (int i = std::max(0, t + 1); i <= dimension; ++i) count += binom_big(dimension, i);
  BigInt total = 1;
  total <<= dimension;
  return Rational(count, total);
}

ChernoffCheck chernoff_tail_check(int dimension, double k_param) {
  if (dimension < 1) throw InputError("chernoff_tail_check: D must be >= 1");
  if (!(k_param > 0.0)) throw InputError("chernoff_tail_check: K must be positive");
  ChernoffCheck c;
  c.dimension = dimension;
  c.k_param = k_param;
  // For integer i, i > D/2 + c is the same as i > ⌊D/2⌋ + c.
  c.threshold = dimension / 2 + stable_ceil(k_param * std::sqrt(static_cast<double>(dimension)));
  c.exact_tail = binomial_upper_tail(dimension, c.threshold);
  c.bound = std::exp(-2.0 * k_param * k_param / 3.0);
  c.holds = to_double(c.exact_tail) < c.bound;
  return c;
}

}  // namespace itershadow
