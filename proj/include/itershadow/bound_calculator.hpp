#pragma once

#include <cstdint>

#include "itershadow/binomial.hpp"

namespace itershadow {

/// Parameters of the random-restriction argument for one (n, ε, μ(A)).
struct BoundReport {
  int n = 0;
  double epsilon = 0.0;
  double mu_a = 0.0;
  double eta_star = 0.0;   // root of (1/32)ημ(1−μ) = exp(−ε²/(3η)) in (0, 1/20]
  double root_residual = 0.0;
  int j = 0;               // ⌈η n⌉
  int dimension = 0;       // D = 2j
  double k_param = 0.0;    // K with 2K² = ε² n / j
  int r = 0;               // ⌈K √D⌉
  int r_epsilon = 0;       // ⌈ε √n⌉; equals r up to floating rounding
  double chernoff_term = 0.0;  // exp(−2K²/3)
  double explicit_bound = 0.0; // (1/16)η μ(1−μ) − exp(−2K²/3)
  bool precondition_ok = false;  // η n ≥ 1/2, which also gives j/n ≤ 2η ≤ 1/10
};

/// Root of f(η) = (1/32)ημ(1−μ) − exp(−ε²/(3η)) in (0, 1/20]: geometric bracket
/// scan over 10³ points in [1e-6, 1/20], then bisection to 1e-12.
/// Throws InfeasibleError when f never changes sign there.
double solve_eta(double epsilon, double mu_a);

/// Throws InputError unless ε ∈ (0,1), μ ∈ (0,1) and n is even.
BoundReport bound_calculator(int n, double epsilon, double mu_a);

/// Ceiling that ignores floating noise below 1e-9 (so ⌈0.5·√16⌉ = 2).
int stable_ceil(double x);

struct ChernoffCheck {
  int dimension = 0;
  double k_param = 0.0;
  int threshold = 0;   // D/2 + ⌈K√D⌉
  Rational exact_tail; // Pr[Bin(D, 1/2) > threshold]
  double bound = 0.0;  // exp(−2K²/3)
  bool holds = false;  // exact_tail < bound
};

ChernoffCheck chernoff_tail_check(int dimension, double k_param);

/// Pr[Bin(D, 1/2) > t] as an exact rational.
Rational binomial_upper_tail(int dimension, int t);

}  // namespace itershadow
