#include "itershadow/family_spec.hpp"

#include <sstream>

#include "itershadow/errors.hpp"
#include "itershadow/kruskal_katona.hpp"
#include "itershadow/lfam_io.hpp"
#include "itershadow/rng.hpp"

namespace itershadow {
namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const auto v = std::stoull(s, &used);
    if (used != s.size() || s.empty() || s[0] == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " '" + s + "'");
  }
}

double parse_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InputError("bad " + what + " '" + s + "'");
  }
}

}  // namespace

FamilySpec FamilySpec::parse(const std::string& text, std::uint64_t default_seed) {
  FamilySpec spec;
  spec.seed = default_seed;
  const auto colon = text.find(':');
  const std::string head = text.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (head == "dictator" && rest.empty()) {
    spec.kind = FamilyKind::kDictator;
  } else if ((head == "half-half" || head == "halfhalf") && rest.empty()) {
    spec.kind = FamilyKind::kHalfHalf;
  } else if (head == "lex") {
    spec.kind = FamilyKind::kLexSegment;
    spec.size = parse_u64(rest, "lex segment size");
  } else if (head == "random") {
    spec.kind = FamilyKind::kRandom;
    const auto parts = split(rest, ':');
    if (parts.empty() || parts.size() > 2) throw InputError("random family expects random:P[:SEED]");
    spec.p = parse_double(parts[0], "random family probability");
    if (!(spec.p >= 0.0 && spec.p <= 1.0)) throw InputError("random family probability must lie in [0,1]");
    if (parts.size() == 2) spec.seed = parse_u64(parts[1], "random family seed");
  } else if (head == "weight") {
    spec.kind = FamilyKind::kWeight;
    const auto parts = split(rest, ':');
    if (parts.size() != 2) throw InputError("weight family expects weight:E1,E2,...:THRESHOLD");
    for (const auto& e : split(parts[0], ',')) spec.reference.push_back(static_cast<int>(parse_u64(e, "element")));
    spec.threshold = static_cast<int>(parse_u64(parts[1], "threshold"));
  } else if (head == "file") {
    spec.kind = FamilyKind::kFile;
    if (rest.empty()) throw InputError("file family expects file:PATH");
    spec.path = rest;
  } else {
    throw InputError("unknown family '" + text + "'");
  }
  return spec;
}

std::string FamilySpec::to_string() const {
  switch (kind) {
    case FamilyKind::kDictator:
      return "dictator";
    case FamilyKind::kHalfHalf:
      return "half-half";
    case FamilyKind::kLexSegment:
      return "lex:" + std::to_string(size);
    case FamilyKind::kRandom: {
      std::ostringstream os;
      os << "random:" << p << ":" << seed;
      return os.str();
    }
    case FamilyKind::kWeight: {
      std::string s = "weight:";
      for (std::size_t i = 0; i < reference.size(); ++i) s += (i ? "," : "") + std::to_string(reference[i]);
      return s + ":" + std::to_string(threshold);
    }
    case FamilyKind::kFile:
      return "file:" + path;
  }
  return "?";
}

bool FamilySpec::has_predicate() const {
  return kind == FamilyKind::kDictator || kind == FamilyKind::kHalfHalf || kind == FamilyKind::kWeight;
}

FamilyHandle::FamilyHandle(int n, std::optional<LayerFamily> family, std::optional<WeightPredicate> predicate)
    : n_(n), family_(std::move(family)), predicate_(std::move(predicate)) {}

const LayerFamily& FamilyHandle::family() const {
  if (!family_) throw CapacityError("family is not materialized at n=" + std::to_string(n_));
  return *family_;
}

const WeightPredicate& FamilyHandle::predicate() const {
  if (!predicate_) throw InputError("family has no closed-form predicate");
  return *predicate_;
}

Rational FamilyHandle::measure() const { return family_ ? family_->measure() : predicate_->measure(); }

FamilyHandle generate(const FamilySpec& spec, int n, const GenerateOptions& opts) {
  if (n < 2 || n % 2 != 0 || n > kMaxGround) throw InputError("family generation requires even n in [2, 64]");
  const int k = n / 2;
  const bool fits = n <= opts.cap.max_n && opts.cap.max_n <= ExactCapacity::kHardMaxN;
  std::optional<WeightPredicate> pred;
  switch (spec.kind) {
    case FamilyKind::kDictator:
      pred = WeightPredicate::dictator(n);
      break;
    case FamilyKind::kHalfHalf:
      pred = WeightPredicate::half_half(n);
      break;
    case FamilyKind::kWeight:
      pred = WeightPredicate::at_least(n, k, SetMask::from_elements(n, spec.reference), spec.threshold);
      break;
    case FamilyKind::kLexSegment:
      return FamilyHandle(n, lex_segment(n, k, spec.size, opts.cap), std::nullopt);
    case FamilyKind::kRandom: {
      Xoshiro256 rng(spec.seed);
      LayerFamily f(n, k, opts.cap);
      for (std::uint64_t r = 0; r < f.layer_size(); ++r)
        if (rng.uniform() < spec.p) f.insert(r);
      return FamilyHandle(n, std::move(f), std::nullopt);
    }
    case FamilyKind::kFile: {
      LayerFamily f = read_lfam(spec.path, opts.cap);
      if (f.n() != n || f.k() != k) {
        throw InputError("family file " + spec.path + " has (n,k)=(" + std::to_string(f.n()) + "," +
                         std::to_string(f.k()) + "), expected (" + std::to_string(n) + "," + std::to_string(k) + ")");
      }
      return FamilyHandle(n, std::move(f), std::nullopt);
    }
  }
  std::optional<LayerFamily> fam;
  if (opts.materialize && fits) fam = pred->materialize(opts.cap);
  return FamilyHandle(n, std::move(fam), pred);
}

}  // namespace itershadow
