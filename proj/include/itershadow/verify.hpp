#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace itershadow {

struct VerifyOptions {
  std::uint64_t seed = 1;
  int threads = 1;
  /// Negative control: drops one set from every computed upper shadow in the core suite.
  bool inject_shadow_fault = false;
};

struct CheckResult {
  std::string suite;
  std::string name;
  bool passed = false;
  std::uint64_t cases = 0;
  std::uint64_t failures = 0;
  std::string detail;  // first failing case, if any
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool passed() const;
};

/// Runs the invariant suite(s): core, kk, spectra, restriction or all.
/// Throws InputError for an unknown suite name.
VerifyReport verify(const std::string& suite, const VerifyOptions& opts = {});

const std::vector<std::string>& verify_suite_names();

}  // namespace itershadow
