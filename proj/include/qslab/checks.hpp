#pragma once

// Invariant suite run by `qslab check`: algebraic identities, norm
// inequalities, fixed points, detailed balance, channel positivity and
// closed-form regressions. Each group reports its worst residual.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace qslab::checks {

struct CheckResult {
  std::string name;
  int count = 0;           // individual instances in the group
  double residual = 0.0;   // worst violation or deviation
  double tolerance = 0.0;
  bool passed = false;
};

struct CheckOptions {
  std::uint64_t seed = 0;
  /// Test hook: builds the amplitude-damped qubit with its factor-two rate
  /// misread as a half-convention rate, which must make the suite fail.
  bool corrupt_convention = false;
};

struct CheckSummary {
  std::vector<CheckResult> results;
  int induced_norm_checks = 0;  // sqrt(d) 2->2 versus 1->1 comparisons

  [[nodiscard]] bool all_passed() const;
  [[nodiscard]] int total_checks() const;
};

CheckSummary run_checks(const CheckOptions& options = {});

/// One line per group, then a summary line.
void print_summary(const CheckSummary& summary, std::ostream& out);

}  // namespace qslab::checks
