#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <json.hpp>

#include "itershadow/errors.hpp"
#include "itershadow/experiments.hpp"
#include "itershadow/report_io.hpp"

using namespace itershadow;

TEST_CASE("family spec parsing") {
  CHECK(FamilySpec::parse("dictator").kind == FamilyKind::kDictator);
  CHECK(FamilySpec::parse("half-half").kind == FamilyKind::kHalfHalf);
  const FamilySpec lex = FamilySpec::parse("lex:12");
  CHECK(lex.kind == FamilyKind::kLexSegment);
  CHECK(lex.size == 12);
  const FamilySpec rnd = FamilySpec::parse("random:0.3:9");
  CHECK(rnd.p == 0.3);
  CHECK(rnd.seed == 9);
  CHECK(FamilySpec::parse("random:0.3", 5).seed == 5);
  const FamilySpec w = FamilySpec::parse("weight:1,2,3:2");
  CHECK(w.reference == std::vector<int>{1, 2, 3});
  CHECK(w.threshold == 2);
  CHECK(FamilySpec::parse("file:/tmp/a.lfam").path == "/tmp/a.lfam");
  for (const char* text : {"dictator", "half-half", "lex:12", "random:0.3:9", "weight:1,2,3:2", "file:x.lfam"}) {
    CHECK(FamilySpec::parse(FamilySpec::parse(text).to_string()).to_string() == FamilySpec::parse(text).to_string());
  }
  for (const char* bad : {"", "dict", "lex:", "lex:-1", "random:1.5", "random:x", "weight:1,2", "file:", "dictator:1"}) {
    CHECK_THROWS_AS(FamilySpec::parse(bad), InputError);
  }
}

TEST_CASE("generator examples") {
  const FamilyHandle d = generate(FamilySpec::parse("dictator"), 6);
  CHECK(d.measure() == Rational(1, 2));
  CHECK(d.family().count() == 10);

  const FamilyHandle hh = generate(FamilySpec::parse("half-half"), 6);
  CHECK(hh.family().count() == 10);
  CHECK(hh.measure() == Rational(1, 2));
  CHECK_THROWS_AS(generate(FamilySpec::parse("half-half"), 8), InputError);

  const FamilyHandle r = generate(FamilySpec::parse("random:0.3:4"), 16);
  const double mu = r.family().measure_double();
  const double sigma = std::sqrt(0.3 * 0.7 / static_cast<double>(r.family().layer_size()));
  CHECK(std::abs(mu - 0.3) <= 3 * sigma);
  CHECK(generate(FamilySpec::parse("random:0.3:4"), 16).family() == r.family());
  CHECK_FALSE(generate(FamilySpec::parse("random:0.3:5"), 16).family() == r.family());

  const FamilyHandle big = generate(FamilySpec::parse("half-half"), 50);
  CHECK_FALSE(big.materialized());
  CHECK(big.has_predicate());
  CHECK_THROWS_AS(big.family(), CapacityError);
  CHECK_THROWS_AS(generate(FamilySpec::parse("random:0.5"), 40), CapacityError);

  const FamilyHandle w = generate(FamilySpec::parse("weight:1,2,3:2"), 6);
  CHECK(w.family() == WeightPredicate::half_half(6).materialize());
}

TEST_CASE("file families round trip through LFAM") {
  const auto dir = std::filesystem::temp_directory_path() / "itershadow_exp_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / "lex.lfam";
  const FamilyHandle lex = generate(FamilySpec::parse("lex:40"), 10);
  write_lfam(path, lex.family());
  const FamilyHandle back = generate(FamilySpec::parse("file:" + path.string()), 10);
  CHECK(back.family() == lex.family());
  CHECK_THROWS_AS(generate(FamilySpec::parse("file:" + path.string()), 12), InputError);
}

TEST_CASE("exact runs") {
  ExperimentConfig cfg;
  cfg.n = 10;
  cfg.r = 2;
  cfg.family = FamilySpec::parse("dictator");
  const ExactRow d = run_exact(cfg);
  CHECK(d.mu_family == Rational(1, 2));
  CHECK(d.mu_shadow == Rational(7, 10));
  CHECK(d.mu_complement_shadow == 1);
  CHECK(d.mu_intersection == Rational(7, 10));
  CHECK(d.union_is_full);
  CHECK(d.sum_identity_holds);

  cfg.family = FamilySpec::parse("half-half");
  cfg.n = 6;
  cfg.r = 1;
  CHECK(run_exact(cfg).mu_intersection == Rational(3, 5));

  // dictator complement shadows everything for r >= 1, so the intersection is the dictator shadow
  for (int n = 4; n <= 16; n += 2) {
    for (int r = 1; r <= n / 2; ++r) {
      cfg.n = n;
      cfg.r = r;
      cfg.family = FamilySpec::parse("dictator");
      const ExactRow row = run_exact(cfg);
      REQUIRE(row.mu_complement_shadow == 1);
      REQUIRE(row.mu_intersection == Rational(1, 2) + Rational(r, n));
    }
  }

  // a single set shadowed to the top layer
  cfg.n = 8;
  cfg.r = 4;
  cfg.family = FamilySpec::parse("lex:1");
  const ExactRow top = run_exact(cfg);
  CHECK((top.mu_intersection == 0 || top.mu_intersection == 1));
  CHECK(top.mu_shadow == 1);

  cfg.r.reset();
  cfg.epsilon = 0.5;
  cfg.n = 16;
  CHECK(run_exact(cfg).r == 2);
  cfg.epsilon.reset();
  CHECK_THROWS_AS(run_exact(cfg), InputError);
  cfg.r = 9;
  CHECK_THROWS_AS(run_exact(cfg), LayerOverflowError);
  cfg.n = 40;
  cfg.r = 1;
  CHECK_THROWS_AS(run_exact(cfg), CapacityError);
}

TEST_CASE("monte-carlo runs") {
  ExperimentConfig cfg;
  cfg.n = 20;
  cfg.r = 2;
  cfg.family = FamilySpec::parse("dictator");
  cfg.mc_samples = 100000;
  cfg.seed = 11;
  const McRow d = run_mc(cfg);
  CHECK(d.ci_low <= 0.6);
  CHECK(d.ci_high >= 0.6);
  CHECK(std::abs(d.estimate - 0.6) <= 3 * d.std_error);

  cfg.n = 50;
  cfg.r = 3;
  cfg.family = FamilySpec::parse("half-half");
  cfg.mc_samples = 5000;
  const McRow hh = run_mc(cfg);
  CHECK(hh.estimate > 0);
  CHECK(hh.ci_low < hh.estimate);

  cfg.mc_samples = 0;
  CHECK_THROWS_AS(run_mc(cfg), InputError);
}

TEST_CASE("monte-carlo agrees with exact mode") {
  for (const char* fam : {"dictator", "half-half", "random:0.5:3", "lex:5000", "weight:2,4,6,8,10,12:3"}) {
    for (int r : {1, 2}) {
      ExperimentConfig cfg;
      cfg.n = 14;
      if (std::string(fam) == "lex:5000") cfg.n = 16;
      cfg.r = r;
      cfg.family = FamilySpec::parse(fam);
      cfg.mc_samples = 20000;
      cfg.seed = 99;
      const double exact = to_double(run_exact(cfg).mu_intersection);
      const McRow mc = run_mc(cfg);
      const double se = std::sqrt(exact * (1 - exact) / static_cast<double>(mc.samples));
      CHECK_MESSAGE(std::abs(mc.estimate - exact) <= 3 * se + 1e-12, fam << " r=" << r);
    }
  }
}

TEST_CASE("monte-carlo is reproducible at any thread count") {
  ExperimentConfig cfg;
  cfg.n = 18;
  cfg.r = 2;
  cfg.family = FamilySpec::parse("random:0.5:1");
  cfg.mc_samples = 3000;
  cfg.seed = 4;
  const McRow one = run_mc(cfg);
  for (int t : {2, 3, 7}) {
    cfg.threads = t;
    const McRow many = run_mc(cfg);
    CHECK(many.hits == one.hits);
    CHECK(render_mc({many}, Format::kCsv) == render_mc({one}, Format::kCsv));
  }
}

TEST_CASE("wilson interval") {
  const auto [lo, hi] = wilson_interval(50, 100);
  CHECK(lo == doctest::Approx(0.4038).epsilon(1e-3));
  CHECK(hi == doctest::Approx(0.5962).epsilon(1e-3));
  const auto [z_lo, z_hi] = wilson_interval(0, 100);
  CHECK(z_lo == 0);
  CHECK(z_hi > 0);
}

TEST_CASE("conjecture table") {
  ConjectureOptions opts;
  opts.mc_samples = 2000;
  opts.cap = ExactCapacity{18};
  const auto rows = conjecture_table({6, 8, 10, 22}, {0.3, 0.5}, opts);
  int half_half = 0;
  for (const auto& row : rows) {
    CHECK(row.r == stable_ceil(row.epsilon * std::sqrt(static_cast<double>(row.n))));
    CHECK(row.ratio > 0);
    CHECK(row.ratio == doctest::Approx(row.measure / row.epsilon));
    if (row.family == "half-half") {
      ++half_half;
      CHECK(row.n % 4 == 2);
    }
    if (row.family == "dictator" && row.mode == Mode::kExact) {
      CHECK(*row.exact == Rational(1, 2) + Rational(row.r, row.n));
    }
    CHECK((row.mode == Mode::kExact) == (row.n <= 18));
  }
  CHECK(half_half == 6);
  CHECK_THROWS_AS(conjecture_table({7}, {0.5}), InputError);
}

TEST_CASE("half-half scaling values") {
  const auto rows = half_half_scaling({6, 10, 14}, {1, 2});
  REQUIRE(rows.size() == 6);
  CHECK(rows[0].value == Rational(3, 5));
  CHECK(rows[1].value == 1);
  CHECK(rows[2].value == Rational(10, 21));
  CHECK(rows[3].value == Rational(5, 6));
  CHECK(rows[4].value == Rational(175, 429));
  CHECK(rows[5].value == Rational(105, 143));
  CHECK(rows[2].scaled == doctest::Approx(10.0 / 21 * std::sqrt(10.0)));
}

TEST_CASE("renderers emit exact and floating forms") {
  ExperimentConfig cfg;
  cfg.n = 6;
  cfg.r = 1;
  cfg.family = FamilySpec::parse("half-half");
  const ExactRow row = run_exact(cfg);
  const std::string csv = render_exact({row}, Format::kCsv);
  CHECK(csv.find("3/5,0.59999999999999998") != std::string::npos);
  const auto j = nlohmann::json::parse(render_exact({row}, Format::kJson));
  CHECK(j[0]["mu_intersection"] == "3/5");
  CHECK(j[0]["mu_intersection_f"].get<double>() == 0.6);

  const auto spectrum = nlohmann::json::parse(render_spectrum(spectrum_report(10, 1), Format::kJson));
  CHECK(spectrum["gap"] == "2/5");
  CHECK(spectrum["verdict"] == "pass");
  const std::string spec_csv = render_spectrum(spectrum_report(4, 1), Format::kCsv);
  CHECK(spec_csv.rfind("n,j,i,lambda,lambda_tilde,mu_tilde,gap,verdict", 0) == 0);
  CHECK(spec_csv.find("hypothesis not met") != std::string::npos);

  const auto bound = nlohmann::json::parse(render_bound(bound_calculator(1000, 0.5, 0.5)));
  CHECK(bound["j"] == 9);
  CHECK(bound["precondition_ok"] == true);

  CHECK(parse_format("json") == Format::kJson);
  CHECK_THROWS_AS(parse_format("xml"), InputError);
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("verify suites pass and the negative control fails") {
  for (const auto& suite : verify_suite_names()) {
    const VerifyReport rep = verify(suite);
    for (const auto& c : rep.checks) CHECK_MESSAGE(c.passed, c.suite << "/" << c.name << ": " << c.detail);
  }
  VerifyOptions faulty;
  faulty.inject_shadow_fault = true;
  CHECK_FALSE(verify("core", faulty).passed());
  CHECK_THROWS_AS(verify("nope"), InputError);
}
