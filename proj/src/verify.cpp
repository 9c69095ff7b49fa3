#include "itershadow/verify.hpp"

#include "itershadow/bound_calculator.hpp"
#include "itershadow/errors.hpp"
#include "itershadow/johnson_spectra.hpp"
#include "itershadow/kruskal_katona.hpp"
#include "itershadow/layer_family.hpp"
#include "itershadow/lfam_io.hpp"
#include "itershadow/rng.hpp"
#include "itershadow/subcube.hpp"

namespace itershadow {

bool VerifyReport::passed() const {
  for (const auto& c : checks)
    if (!c.passed) return false;
  return true;
}

const std::vector<std::string>& verify_suite_names() {
  static const std::vector<std::string> names{"core", "kk", "spectra", "restriction"};
  return names;
}

namespace {

class Check {
 public:
  Check(std::string suite, std::string name) {
    result_.suite = std::move(suite);
    result_.name = std::move(name);
  }

  void expect(bool ok, const std::string& what) {
    ++result_.cases;
    if (ok) return;
    if (result_.failures++ == 0) result_.detail = what;
  }

  template <class Describe>
  void expect_lazy(bool ok, Describe&& describe) {
    ++result_.cases;
    if (ok) return;
    if (result_.failures++ == 0) result_.detail = describe();
  }

  CheckResult finish() {
    result_.passed = result_.failures == 0;
    return std::move(result_);
  }

 private:
  CheckResult result_;
};

std::string cell(int n, int k, int r) {
  return "n=" + std::to_string(n) + " k=" + std::to_string(k) + " r=" + std::to_string(r);
}

LayerFamily random_family(int n, int k, double p, Xoshiro256& rng) {
  LayerFamily f(n, k);
  for (std::uint64_t r = 0; r < f.layer_size(); ++r)
    if (rng.uniform() < p) f.insert(r);
  return f;
}

// Upper shadow, optionally with one set dropped as a negative control.
LayerFamily shadow_step(const LayerFamily& a, const VerifyOptions& opts) {
  LayerFamily s = upper_shadow(a, opts.threads);
  if (opts.inject_shadow_fault) {
    bool dropped = false;
    s.for_each_member([&](std::uint64_t r, std::uint64_t) {
      if (!dropped) s.erase(r);
      dropped = true;
    });
  }
  return s;
}

LayerFamily shadow_steps(LayerFamily a, int r, const VerifyOptions& opts) {
  for (int i = 0; i < r; ++i) a = shadow_step(a, opts);
  return a;
}

void core_suite(const VerifyOptions& opts, std::vector<CheckResult>& out) {
  Xoshiro256 rng(opts.seed);
  {
    Check c("core", "rank_unrank_bijection");
    for (int n = 1; n <= 14; ++n) {
      for (int k = 0; k <= n; ++k) {
        for (std::uint64_t r = 0; r < binom(n, k); ++r) {
          const SetMask s = unrank(r, n, k);
          c.expect_lazy(s.size() == k && rank(s, k) == r, [&] { return cell(n, k, 0) + " rank=" + std::to_string(r); });
        }
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("core", "shadow_composition");
    for (int n = 4; n <= 12; n += 2) {
      for (int k = 1; k < n; ++k) {
        const LayerFamily a = random_family(n, k, 0.05, rng);
        for (int r = 0; r <= n - k; ++r) {
          const LayerFamily folded = shadow_steps(a, r, opts);
          c.expect_lazy(folded == iterated_upper_shadow(a, r, opts.threads) &&
                            folded == iterated_upper_shadow_direct(a, r),
                        [&] { return cell(n, k, r); });
        }
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("core", "shadow_monotonicity");
    for (int n = 6; n <= 14; n += 2) {
      for (int trial = 0; trial < 4; ++trial) {
        const int k = n / 2;
        const LayerFamily small = random_family(n, k, 0.02, rng);
        LayerFamily big = small;
        for (std::uint64_t r = 0; r < big.layer_size(); ++r)
          if (rng.uniform() < 0.02) big.insert(r);
        c.expect(shadow_step(small, opts).is_subset_of(shadow_step(big, opts)), cell(n, k, 1));
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("core", "local_lym");
    for (int n = 6; n <= 14; n += 2) {
      for (int k = n / 2; k < n; ++k) {
        for (double p : {0.01, 0.1, 0.5}) {
          const LayerFamily a = random_family(n, k, p, rng);
          c.expect(shadow_step(a, opts).measure() >= a.measure(), cell(n, k, 1));
        }
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("core", "dictator_exactness");
    for (int n = 2; n <= 20; n += 2) {
      const LayerFamily dict = WeightPredicate::dictator(n).materialize();
      LayerFamily s = dict;
      for (int r = 0; r <= n / 2; ++r) {
        if (r > 0) s = shadow_step(s, opts);
        c.expect(s.measure() == Rational(1, 2) + Rational(r, n), cell(n, n / 2, r));
      }
      c.expect(shadow_step(dict.complement(), opts).measure() == 1, cell(n, n / 2, 1) + " complement");
    }
    out.push_back(c.finish());
  }
  {
    Check c("core", "pair_census_expansion");
    for (int n = 10; n <= 20; n += 2) {
      std::vector<LayerFamily> families{WeightPredicate::dictator(n).materialize()};
      if (n % 4 == 2) families.push_back(WeightPredicate::half_half(n).materialize());
      for (int i = 0; i < 3; ++i) families.push_back(random_family(n, n / 2, rng.uniform(), rng));
      for (int j = 1; 10 * j <= n; ++j) {
        for (const auto& a : families) {
          const ExpansionCheck e = expansion_lower_bound(a, j, opts.threads);
          const bool total_ok = e.census.total_pairs == a.layer_size() * johnson_degree(n, j);
          c.expect(total_ok && e.holds, cell(n, n / 2, 0) + " j=" + std::to_string(j));
        }
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("core", "lfam_roundtrip");
    for (int n = 2; n <= 12; n += 2) {
      const LayerFamily a = random_family(n, n / 2, 0.5, rng);
      const auto bytes = encode_lfam(a);
      c.expect(decode_lfam(bytes) == a, cell(n, n / 2, 0));
    }
    out.push_back(c.finish());
  }
}

void kk_suite(const VerifyOptions& opts, std::vector<CheckResult>& out) {
  {
    Check c("kk", "lex_shadow_closure");
    for (int n = 2; n <= 12; ++n) {
      for (int k = 1; k < n; ++k) {
        const ClosureSweep s = lex_closure_sweep(n, k, 3);
        c.expect_lazy(s.all_segments, [&] {
          return cell(n, k, s.first_failure_r.value_or(0)) + " size=" + std::to_string(s.first_failure_size.value_or(0));
        });
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("kk", "half_measure_bound");
    for (int n = 2; n <= 16; n += 2) {
      for (int r = 0; r <= n / 2; ++r) {
        const KKBound b = kk_iterated_lower_bound(n, Rational(1, 2), r, opts.threads);
        c.expect(b.bound == Rational(1, 2) + Rational(r, n), cell(n, n / 2, r));
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("kk", "random_extremality");
    Xoshiro256 rng(opts.seed ^ 0x6b6bULL);
    for (int n = 6; n <= 12; n += 2) {
      const int k = n / 2;
      const std::uint64_t layer = binom(n, k);
      for (int trial = 0; trial < 10; ++trial) {
        const std::uint64_t size = 1 + rng.below(layer);
        LayerFamily a(n, k);
        std::uint64_t placed = 0;
        while (placed < size) {
          const std::uint64_t r = rng.below(layer);
          if (!a.contains(r)) {
            a.insert(r);
            ++placed;
          }
        }
        const LayerFamily seg = lex_segment(n, k, size);
        for (int r = 1; r <= 3; ++r) {
          c.expect(iterated_upper_shadow(a, r).count() >= iterated_upper_shadow(seg, r).count(), cell(n, k, r));
        }
      }
    }
    out.push_back(c.finish());
  }
}

void spectra_suite(const VerifyOptions&, std::vector<CheckResult>& out) {
  {
    Check c("spectra", "formula_vs_dense_oracle");
    for (int n = 4; n <= 12; n += 2)
      for (int j = 1; j <= n / 2; ++j) c.expect(formula_matches_dense(n, j), "n=" + std::to_string(n) + " j=" + std::to_string(j));
    out.push_back(c.finish());
  }
  {
    Check g("spectra", "spectral_gap");
    Check kosh("spectra", "koshelev_reduction");
    Check tri("spectra", "triangle_and_case_bounds");
    for (int n = 10; n <= 40; n += 2) {
      for (int j = 1; 10 * j <= n; ++j) {
        const std::string where = "n=" + std::to_string(n) + " j=" + std::to_string(j);
        const SpectrumReport rep = spectrum_report(n, j);
        g.expect(rep.verdict.value_or(false) && rep.gap >= Rational(j, 2 * n), where);
        for (int i = 1; i <= n / 2; ++i) {
          kosh.expect(koshelev_bound_check(n, j, i).holds, where + " i=" + std::to_string(i));
          const CaseSplitBound cs = case_split_bound(n, j, i);
          const Rational lt = rep.lambda_tilde[i] < 0 ? Rational(-rep.lambda_tilde[i]) : rep.lambda_tilde[i];
          tri.expect(cs.max_term >= lt && cs.bound >= cs.max_term, where + " i=" + std::to_string(i));
        }
      }
    }
    out.push_back(g.finish());
    out.push_back(kosh.finish());
    out.push_back(tri.finish());
  }
  {
    Check c("spectra", "large_index_scalar_inequality");
    constexpr int kPoints = 10000;
    for (int t = 1; t <= kPoints; ++t) {
      const double eta = 0.1 * t / kPoints;
      const auto [lhs, rhs] = large_index_scalar_inequality(eta);
      c.expect(lhs <= rhs, "eta=" + std::to_string(eta));
    }
    out.push_back(c.finish());
  }
}

void restriction_suite(const VerifyOptions& opts, std::vector<CheckResult>& out) {
  {
    Check c("restriction", "pipeline_sample_invariants");
    const int n = 12;
    Xoshiro256 rng(opts.seed ^ 0x7265ULL);
    std::vector<LayerFamily> families{WeightPredicate::dictator(n).materialize(), random_family(n, n / 2, 0.5, rng),
                                      random_family(n, n / 2, 0.1, rng)};
    for (const auto& a : families) {
      for (std::optional<int> d : {std::optional<int>{}, std::optional<int>{8}}) {
        PipelineOptions po;
        po.samples = 300;
        po.seed = opts.seed;
        po.threads = opts.threads;
        po.dimension_override = d;
        po.compute_truth = false;
        const PipelineResult res = pipeline_estimate(a, 0.5, po);
        for (std::size_t i = 0; i < res.invariants.size(); ++i) {
          c.expect(res.invariants[i].all(), "sample " + std::to_string(i) + " D=" + std::to_string(res.summary.params.dimension));
        }
      }
    }
    out.push_back(c.finish());
  }
  {
    Check c("restriction", "harris_random_upsets");
    Xoshiro256 rng(opts.seed ^ 0x6861ULL);
    for (int trial = 0; trial < 200; ++trial) {
      const int d = 1 + static_cast<int>(rng.below(12));
      auto seeds = [&] {
        std::vector<std::uint64_t> s(1 + rng.below(4));
        for (auto& x : s) x = rng.below(std::uint64_t{1} << d);
        return s;
      };
      const HarrisCheck h = harris_check(upward_closure(d, seeds()), upward_closure(d, seeds()));
      c.expect(h.holds, "trial " + std::to_string(trial) + " D=" + std::to_string(d));
    }
    out.push_back(c.finish());
  }
  {
    Check c("restriction", "chernoff_exact_tail");
    for (int d = 4; d <= 400; d += 4) {
      for (double k = 0.5; k <= 4.0 + 1e-12; k += 0.5) {
        c.expect(chernoff_tail_check(d, k).holds, "D=" + std::to_string(d) + " K=" + std::to_string(k));
      }
    }
    out.push_back(c.finish());
  }
}

}  // namespace

VerifyReport verify(const std::string& suite, const VerifyOptions& opts) {
  VerifyReport rep;
  const bool all = suite == "all";
  bool known = all;
  if (all || suite == "core") known = true, core_suite(opts, rep.checks);
  if (all || suite == "kk") known = true, kk_suite(opts, rep.checks);
  if (all || suite == "spectra") known = true, spectra_suite(opts, rep.checks);
  if (all || suite == "restriction") known = true, restriction_suite(opts, rep.checks);
  if (!known) throw InputError("unknown verify suite '" + suite + "' (expected core, kk, spectra, restriction or all)");
  return rep;
}

}  // namespace itershadow
