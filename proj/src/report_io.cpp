#include "itershadow/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <json.hpp>
#include <sstream>

#include "itershadow/errors.hpp"

namespace itershadow {

using Json = nlohmann::ordered_json;

Format parse_format(const std::string& text) {
  if (text == "csv") return Format::kCsv;
  if (text == "json") return Format::kJson;
  throw InputError("unknown format '" + text + "' (expected csv or json)");
}

std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

class Csv {
 public:
  explicit Csv(std::vector<std::string> header) : width_(header.size()) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < width_; ++i) {
      if (i) out_ << ',';
      if (i < cells.size()) out_ << cells[i];
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  std::size_t width_;
  std::ostringstream out_;
};

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

// Doubles go through the same %.17g text in both formats.
Json num(double x) { return Json::parse(format_double(std::isfinite(x) ? x : 0.0)); }

void put_exact(Json& j, const std::string& key, const Rational& q) {
  j[key] = to_fraction_string(q);
  j[key + "_f"] = num(to_double(q));
}

std::string frac(const Rational& q) { return to_fraction_string(q); }
std::string dbl(const Rational& q) { return format_double(to_double(q)); }
std::string b01(bool b) { return b ? "true" : "false"; }
std::string str(const BigInt& x) { return x.str(); }

Json bound_json(const BoundReport& b) {
  Json j;
  j["n"] = b.n;
  j["epsilon"] = num(b.epsilon);
  j["mu_a"] = num(b.mu_a);
  j["eta_star"] = num(b.eta_star);
  j["root_residual"] = num(b.root_residual);
  j["j"] = b.j;
  j["D"] = b.dimension;
  j["K"] = num(b.k_param);
  j["r"] = b.r;
  j["r_epsilon"] = b.r_epsilon;
  j["chernoff_term"] = num(b.chernoff_term);
  j["explicit_bound"] = num(b.explicit_bound);
  j["precondition_ok"] = b.precondition_ok;
  return j;
}

// Space-separated elements, so CSV cells need no quoting.
std::string set_cell(const SetMask& s) {
  std::string out;
  for (int e : s.elements()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(e);
  }
  return out;
}

std::string opt_flag(const std::optional<bool>& b) { return b ? b01(*b) : "n/a"; }

}  // namespace

std::string render_family(const LfamManifest& m, const Rational& measure, const std::string& spec, Format f) {
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(m.checksum));
  if (f == Format::kJson) {
    Json j;
    j["family"] = spec;
    j["n"] = m.n;
    j["k"] = m.k;
    j["popcount"] = m.popcount;
    put_exact(j, "measure", measure);
    j["fnv1a64"] = hex;
    return dump(j);
  }
  Csv csv({"family", "n", "k", "popcount", "measure", "measure_f", "fnv1a64"});
  csv.row({spec, std::to_string(m.n), std::to_string(m.k), std::to_string(m.popcount), frac(measure), dbl(measure), hex});
  return csv.str();
}

std::string render_exact(const std::vector<ExactRow>& rows, Format f) {
  if (f == Format::kJson) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["family"] = r.family;
      j["n"] = r.n;
      j["r"] = r.r;
      put_exact(j, "mu_family", r.mu_family);
      put_exact(j, "mu_shadow", r.mu_shadow);
      put_exact(j, "mu_complement_shadow", r.mu_complement_shadow);
      put_exact(j, "mu_intersection", r.mu_intersection);
      put_exact(j, "mu_union", r.mu_union);
      j["union_is_full"] = r.union_is_full;
      j["sum_identity_holds"] = r.sum_identity_holds;
      arr.push_back(j);
    }
    return dump(arr);
  }
  Csv csv({"family", "n", "r", "mu_family", "mu_family_f", "mu_shadow", "mu_shadow_f", "mu_complement_shadow",
           "mu_complement_shadow_f", "mu_intersection", "mu_intersection_f", "mu_union", "union_is_full",
           "sum_identity_holds"});
  for (const auto& r : rows) {
    csv.row({r.family, std::to_string(r.n), std::to_string(r.r), frac(r.mu_family), dbl(r.mu_family),
             frac(r.mu_shadow), dbl(r.mu_shadow), frac(r.mu_complement_shadow), dbl(r.mu_complement_shadow),
             frac(r.mu_intersection), dbl(r.mu_intersection), frac(r.mu_union), b01(r.union_is_full),
             b01(r.sum_identity_holds)});
  }
  return csv.str();
}

std::string render_mc(const std::vector<McRow>& rows, Format f) {
  if (f == Format::kJson) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["family"] = r.family;
      j["n"] = r.n;
      j["r"] = r.r;
      j["samples"] = r.samples;
      j["hits"] = r.hits;
      j["estimate"] = num(r.estimate);
      j["std_error"] = num(r.std_error);
      j["ci95_low"] = num(r.ci_low);
      j["ci95_high"] = num(r.ci_high);
      arr.push_back(j);
    }
    return dump(arr);
  }
  Csv csv({"family", "n", "r", "samples", "hits", "estimate", "std_error", "ci95_low", "ci95_high"});
  for (const auto& r : rows) {
    csv.row({r.family, std::to_string(r.n), std::to_string(r.r), std::to_string(r.samples), std::to_string(r.hits),
             format_double(r.estimate), format_double(r.std_error), format_double(r.ci_low), format_double(r.ci_high)});
  }
  return csv.str();
}

std::string render_spectrum(const SpectrumReport& rep, Format f) {
  const std::string verdict = rep.verdict ? (*rep.verdict ? "pass" : "fail") : "hypothesis not met";
  if (f == Format::kJson) {
    Json j;
    j["n"] = rep.n;
    j["k"] = rep.k;
    j["j"] = rep.j;
    put_exact(j, "eta", rep.eta);
    j["degree"] = str(rep.degree);
    Json rows = Json::array();
    for (std::size_t i = 0; i < rep.lambda.size(); ++i) {
      Json e;
      e["i"] = i;
      e["lambda"] = str(rep.lambda[i]);
      put_exact(e, "lambda_tilde", rep.lambda_tilde[i]);
      put_exact(e, "mu_tilde", rep.mu_tilde[i]);
      rows.push_back(e);
    }
    j["eigenvalues"] = rows;
    put_exact(j, "gap", rep.gap);
    j["gap_index"] = rep.gap_index;
    put_exact(j, "gap_threshold", rep.eta / 2);
    j["verdict"] = verdict;
    return dump(j);
  }
  Csv csv({"n", "j", "i", "lambda", "lambda_tilde", "mu_tilde", "gap", "verdict", "lambda_tilde_f", "mu_tilde_f", "gap_f"});
  for (std::size_t i = 0; i < rep.lambda.size(); ++i) {
    csv.row({std::to_string(rep.n), std::to_string(rep.j), std::to_string(i), str(rep.lambda[i]),
             frac(rep.lambda_tilde[i]), frac(rep.mu_tilde[i]), frac(rep.gap), verdict, dbl(rep.lambda_tilde[i]),
             dbl(rep.mu_tilde[i]), dbl(rep.gap)});
  }
  return csv.str();
}

std::string render_kk(const KKBound& b, int n, int r, Format f) {
  if (f == Format::kJson) {
    Json j;
    j["n"] = n;
    j["k"] = n / 2;
    j["r"] = r;
    put_exact(j, "requested_measure", b.requested_measure);
    put_exact(j, "effective_measure", b.effective_measure);
    j["size"] = b.size;
    put_exact(j, "bound", b.bound);
    return dump(j);
  }
  Csv csv({"n", "k", "r", "requested_measure", "effective_measure", "effective_measure_f", "size", "bound", "bound_f"});
  csv.row({std::to_string(n), std::to_string(n / 2), std::to_string(r), frac(b.requested_measure),
           frac(b.effective_measure), dbl(b.effective_measure), std::to_string(b.size), frac(b.bound), dbl(b.bound)});
  return csv.str();
}

std::string render_bound(const BoundReport& rep) { return dump(bound_json(rep)); }

std::string render_pipeline(const PipelineResult& res, Format f) {
  const PipelineSummary& s = res.summary;
  const PipelineParams& p = s.params;
  if (f == Format::kJson) {
    Json samples = Json::array();
    for (std::size_t i = 0; i < res.samples.size(); ++i) {
      const RestrictionSample& x = res.samples[i];
      const SampleInvariants& inv = res.invariants[i];
      Json j;
      j["index"] = i;
      j["bottom"] = x.spec.bottom.to_string();
      j["free"] = x.spec.free.to_string();
      put_exact(j, "alpha", x.alpha);
      put_exact(j, "gamma", x.gamma);
      put_exact(j, "upset_meet", x.upset_meet_measure);
      put_exact(j, "truncated", x.truncated_measure);
      put_exact(j, "good_layer", x.good_layer_measure);
      j["layer_lift"] = opt_flag(inv.layer_lift);
      j["invariants_ok"] = inv.all();
      samples.push_back(j);
    }
    Json sum;
    sum["bound"] = bound_json(s.bound);
    sum["D"] = p.dimension;
    sum["K"] = num(p.k_param);
    sum["r"] = p.r;
    sum["ell"] = p.ell;
    sum["chernoff_term"] = num(p.chernoff_term);
    sum["samples"] = s.samples;
    sum["alpha_mean"] = num(s.alpha.mean);
    sum["alpha_se"] = num(s.alpha.std_error);
    sum["gamma_mean"] = num(s.gamma.mean);
    sum["gamma_se"] = num(s.gamma.std_error);
    sum["upset_meet_mean"] = num(s.upset_meet.mean);
    sum["good_layer_mean"] = num(s.good_layer.mean);
    sum["good_layer_se"] = num(s.good_layer.std_error);
    put_exact(sum, "exact_q", s.exact_q);
    if (s.exact_truth) put_exact(sum, "exact_truth", *s.exact_truth);
    sum["empirical_bound"] = num(s.empirical_bound);
    sum["explicit_bound"] = num(s.explicit_bound);
    put_exact(sum, "chernoff_exact_tail", s.chernoff.exact_tail);
    sum["chernoff_holds"] = s.chernoff.holds;
    sum["violations"] = s.total_violations();
    Json j;
    j["samples"] = samples;
    j["summary"] = sum;
    return dump(j);
  }
  Csv csv({"row", "index", "bottom", "free", "alpha", "gamma", "upset_meet", "truncated", "good_layer", "layer_lift",
           "invariants_ok", "eta_star", "j", "D", "K", "r", "ell", "exact_q", "exact_truth", "empirical_bound",
           "explicit_bound", "chernoff_holds", "violations"});
  for (std::size_t i = 0; i < res.samples.size(); ++i) {
    const RestrictionSample& x = res.samples[i];
    const SampleInvariants& inv = res.invariants[i];
    csv.row({"sample", std::to_string(i), set_cell(x.spec.bottom), set_cell(x.spec.free), dbl(x.alpha),
             dbl(x.gamma), dbl(x.upset_meet_measure), dbl(x.truncated_measure), dbl(x.good_layer_measure),
             opt_flag(inv.layer_lift), b01(inv.all())});
  }
  csv.row({"summary", std::to_string(s.samples), "", "", format_double(s.alpha.mean), format_double(s.gamma.mean),
           format_double(s.upset_meet.mean), "", format_double(s.good_layer.mean), "", b01(s.total_violations() == 0),
           format_double(s.bound.eta_star), std::to_string(p.j), std::to_string(p.dimension), format_double(p.k_param),
           std::to_string(p.r), std::to_string(p.ell), dbl(s.exact_q), s.exact_truth ? dbl(*s.exact_truth) : "",
           format_double(s.empirical_bound), format_double(s.explicit_bound), b01(s.chernoff.holds),
           std::to_string(s.total_violations())});
  return csv.str();
}

std::string render_conjecture(const std::vector<ConjectureRow>& rows, Format f) {
  if (f == Format::kJson) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["family"] = r.family;
      j["n"] = r.n;
      j["epsilon"] = num(r.epsilon);
      j["r"] = r.r;
      j["mode"] = r.mode == Mode::kExact ? "exact" : "mc";
      if (r.exact) j["measure_exact"] = to_fraction_string(*r.exact);
      j["measure"] = num(r.measure);
      j["ci95_low"] = num(r.ci_low);
      j["ci95_high"] = num(r.ci_high);
      j["ratio"] = num(r.ratio);
      arr.push_back(j);
    }
    return dump(arr);
  }
  Csv csv({"family", "n", "epsilon", "r", "mode", "measure_exact", "measure", "ci95_low", "ci95_high", "ratio"});
  for (const auto& r : rows) {
    csv.row({r.family, std::to_string(r.n), format_double(r.epsilon), std::to_string(r.r),
             r.mode == Mode::kExact ? "exact" : "mc", r.exact ? frac(*r.exact) : "", format_double(r.measure),
             format_double(r.ci_low), format_double(r.ci_high), format_double(r.ratio)});
  }
  return csv.str();
}

std::string render_scaling(const std::vector<ScalingRow>& rows, Format f) {
  if (f == Format::kJson) {
    Json arr = Json::array();
    for (const auto& r : rows) {
      Json j;
      j["n"] = r.n;
      j["r"] = r.r;
      put_exact(j, "value", r.value);
      j["scaled"] = num(r.scaled);
      arr.push_back(j);
    }
    return dump(arr);
  }
  Csv csv({"n", "r", "value", "value_f", "value_sqrt_n_over_r"});
  for (const auto& r : rows) {
    csv.row({std::to_string(r.n), std::to_string(r.r), frac(r.value), dbl(r.value), format_double(r.scaled)});
  }
  return csv.str();
}

std::string render_verify(const VerifyReport& rep, Format f) {
  if (f == Format::kJson) {
    Json arr = Json::array();
    for (const auto& c : rep.checks) {
      Json j;
      j["suite"] = c.suite;
      j["check"] = c.name;
      j["passed"] = c.passed;
      j["cases"] = c.cases;
      j["failures"] = c.failures;
      j["first_failure"] = c.detail;
      arr.push_back(j);
    }
    Json j;
    j["passed"] = rep.passed();
    j["checks"] = arr;
    return dump(j);
  }
  Csv csv({"suite", "check", "status", "cases", "failures", "first_failure"});
  for (const auto& c : rep.checks) {
    csv.row({c.suite, c.name, c.passed ? "pass" : "fail", std::to_string(c.cases), std::to_string(c.failures),
             c.detail});
  }
  return csv.str();
}

}  // namespace itershadow
