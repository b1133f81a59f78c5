#pragma once

// The acceptance battery and a seeded invariant sweep, shared by the
// acceptance test binary and `ergoshift selftest`.

#include <ostream>
#include <string>
#include <vector>

namespace ergoshift {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;  // 0: no budget
};

/// Criteria 1-9 in order. A criterion over its runtime budget fails.
std::vector<CheckResult> run_acceptance();

/// Algebraic identities on seeded random inputs: word round-trips, ring
/// laws, shift and time-reversal laws, expectation laws, metric axioms.
std::vector<CheckResult> run_invariant_suite();

/// "PASS name (1.23 s): detail" per line; returns whether all passed.
bool print_results(std::ostream& out, const std::vector<CheckResult>& results);

}  // namespace ergoshift
