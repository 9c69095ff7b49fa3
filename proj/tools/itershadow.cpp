// Command-line driver. Exit codes: 0 ok, 1 verification failure, 2 input error, 3 capacity error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "itershadow/errors.hpp"
#include "itershadow/experiments.hpp"
#include "itershadow/report_io.hpp"

namespace {

using namespace itershadow;

constexpr int kExitVerifyFailed = 1;
constexpr int kExitInput = 2;
constexpr int kExitCapacity = 3;

struct Globals {
  int n = 0;
  std::optional<double> epsilon;
  std::optional<int> r;
  std::string family = "dictator";
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> samples;  // absent means the subcommand default
  int threads = 1;
  std::string format = "csv";
  std::string out;
  int exact_max_n = ExactCapacity::kDefaultMaxN;
};

void require_n(const Globals& g) {
  if (g.n <= 0) throw InputError("--n is required");
}

ExactCapacity capacity(const Globals& g) {
  ExactCapacity cap{g.exact_max_n};
  if (cap.max_n > ExactCapacity::kHardMaxN) {
    throw InputError("--exact-max-n cannot exceed " + std::to_string(ExactCapacity::kHardMaxN));
  }
  return cap;
}

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw InputError("cannot open output file " + g.out);
  f << text;
  if (!f) throw InputError("failed writing " + g.out);
}

ExperimentConfig experiment(const Globals& g, Mode mode) {
  require_n(g);
  ExperimentConfig c;
  c.n = g.n;
  c.r = g.r;
  c.epsilon = g.epsilon;
  c.family = FamilySpec::parse(g.family, g.seed);
  c.mode = mode;
  if (g.samples) c.mc_samples = *g.samples;
  c.seed = g.seed;
  c.threads = g.threads;
  c.cap = capacity(g);
  return c;
}

template <class T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !(is >> std::ws).eof()) throw InputError("bad list entry '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InputError("empty list");
  return out;
}

int run(int argc, char** argv) {
  CLI::App app{"Iterated upper shadows, Johnson-graph spectra and random restrictions"};
  app.set_config("--config", "", "key=value file mirroring the flags; command-line flags win");
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("--n", g.n, "Ground set size (even)");
  app.add_option("--epsilon", g.epsilon, "Sets r = ceil(epsilon*sqrt(n)) when --r is absent");
  app.add_option("--r", g.r, "Shadow depth");
  app.add_option("--family", g.family,
                 "dictator | half-half | lex:SIZE | random:P[:SEED] | weight:E1,E2,...:THRESHOLD | file:PATH")
      ->capture_default_str();
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--samples", g.samples, "Monte-Carlo or restriction samples");
  app.add_option("--threads", g.threads, "Worker threads; output does not depend on it")->capture_default_str();
  app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--out", g.out, "Output file (default stdout)");
  app.add_option("--exact-max-n", g.exact_max_n, "Exact-mode capacity")->capture_default_str();

  int status = 0;

  auto* gen = app.add_subcommand("gen-family", "Materialize a family and write it as LFAM plus manifest");
  std::string lfam_path;
  gen->add_option("path", lfam_path, "LFAM output path")->required();
  gen->callback([&] {
    require_n(g);
    const FamilySpec spec = FamilySpec::parse(g.family, g.seed);
    const FamilyHandle h = generate(spec, g.n, GenerateOptions{true, capacity(g)});
    write_lfam(lfam_path, h.family());
    emit(g, render_family(make_manifest(h.family()), h.family().measure(), spec.to_string(), parse_format(g.format)));
  });

  auto* exact = app.add_subcommand("shadow-exact", "Exact measures of both iterated shadows and their intersection");
  exact->callback([&] { emit(g, render_exact({run_exact(experiment(g, Mode::kExact))}, parse_format(g.format))); });

  auto* mc = app.add_subcommand("shadow-mc", "Monte-Carlo estimate of the shadow intersection measure");
  mc->callback([&] { emit(g, render_mc({run_mc(experiment(g, Mode::kMonteCarlo))}, parse_format(g.format))); });

  auto* spectra = app.add_subcommand("spectra", "Eigenvalues and spectral-gap verdict of J(n, n/2, j)");
  int spec_j = 1;
  spectra->add_option("--j", spec_j, "Distance parameter")->capture_default_str();
  spectra->callback([&] {
    require_n(g);
    const SpectrumReport rep = spectrum_report(g.n, spec_j);
    emit(g, render_spectrum(rep, parse_format(g.format)));
    if (rep.verdict && !*rep.verdict) status = kExitVerifyFailed;
  });

  auto* kk = app.add_subcommand("kk-bound", "Least iterated-shadow measure for a given family measure");
  std::string kk_measure = "1/2";
  kk->add_option("--measure", kk_measure, "Family measure as p/q or decimal")->capture_default_str();
  kk->callback([&] {
    require_n(g);
    if (!g.r) throw InputError("--r is required");
    const KKBound b = kk_iterated_lower_bound(g.n, parse_rational(kk_measure), *g.r, g.threads);
    emit(g, render_kk(b, g.n, *g.r, parse_format(g.format)));
  });

  auto* pipe = app.add_subcommand("restrict-pipeline", "Replay the random-restriction chain on sampled subcubes");
  std::optional<int> pipe_d;
  bool pipe_no_truth = false;
  pipe->add_option("--D", pipe_d, "Subcube dimension override (even, 2j <= D <= n)");
  pipe->add_flag("--no-truth", pipe_no_truth, "Skip the exact shadow-intersection measure");
  pipe->callback([&] {
    require_n(g);
    if (!g.epsilon) throw InputError("--epsilon is required");
    const FamilyHandle h = generate(FamilySpec::parse(g.family, g.seed), g.n, GenerateOptions{true, capacity(g)});
    PipelineOptions po;
    if (g.samples) po.samples = *g.samples;
    po.seed = g.seed;
    po.threads = g.threads;
    po.dimension_override = pipe_d;
    po.compute_truth = !pipe_no_truth;
    const PipelineResult res = pipeline_estimate(h.family(), *g.epsilon, po);
    emit(g, render_pipeline(res, parse_format(g.format)));
    if (res.summary.total_violations() != 0 || !res.summary.chernoff.holds) status = kExitVerifyFailed;
  });

  auto* bound = app.add_subcommand("bound-calc", "Solve for eta and report the explicit constants (JSON)");
  double bound_mu = 0.5;
  bound->add_option("--mu", bound_mu, "Family measure")->capture_default_str();
  bound->callback([&] {
    require_n(g);
    if (!g.epsilon) throw InputError("--epsilon is required");
    emit(g, render_bound(bound_calculator(g.n, *g.epsilon, bound_mu)));
  });

  auto* table = app.add_subcommand("conjecture-table", "Half-half intersection measure over (n, epsilon) with ratio to epsilon");
  std::string table_ns = "6,10,14,18,22,26,30,34,42,50";
  std::string table_eps = "0.3,0.5,0.8";
  bool table_no_dictator = false;
  table->add_option("--ns", table_ns, "Comma-separated even n values")->capture_default_str();
  table->add_option("--epsilons", table_eps, "Comma-separated epsilon values")->capture_default_str();
  table->add_flag("--no-dictator", table_no_dictator, "Omit the dictator calibration rows");
  table->callback([&] {
    ConjectureOptions co;
    if (g.samples) co.mc_samples = *g.samples;
    co.seed = g.seed;
    co.threads = g.threads;
    co.cap = capacity(g);
    co.include_dictator = !table_no_dictator;
    emit(g, render_conjecture(conjecture_table(parse_list<int>(table_ns), parse_list<double>(table_eps), co),
                              parse_format(g.format)));
  });

  auto* scaling = app.add_subcommand("scaling-table", "Exact half-half intersection values with value*sqrt(n)/r");
  std::string scaling_ns = "6,10,14,18,22,26";
  std::string scaling_rs = "1,2";
  scaling->add_option("--ns", scaling_ns, "Comma-separated n values, n = 2 mod 4")->capture_default_str();
  scaling->add_option("--rs", scaling_rs, "Comma-separated r values")->capture_default_str();
  scaling->callback([&] {
    emit(g, render_scaling(half_half_scaling(parse_list<int>(scaling_ns), parse_list<int>(scaling_rs), g.threads, capacity(g)),
                           parse_format(g.format)));
  });

  auto* ver = app.add_subcommand("verify", "Run an invariant suite");
  std::string suite = "all";
  bool inject = false;
  ver->add_option("suite", suite, "core | kk | spectra | restriction | all")->capture_default_str();
  ver->add_flag("--inject-fault", inject, "Corrupt computed shadows (negative control)");
  ver->callback([&] {
    VerifyOptions vo;
    vo.seed = g.seed;
    vo.threads = g.threads;
    vo.inject_shadow_fault = inject;
    const VerifyReport rep = verify(suite, vo);
    emit(g, render_verify(rep, parse_format(g.format)));
    if (!rep.passed()) status = kExitVerifyFailed;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const itershadow::CapacityError& e) {
    std::cerr << "capacity error: " << e.what() << "\n";
    return kExitCapacity;
  } catch (const itershadow::InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
