#pragma once

// Self-checks run by `dce validate` and the acceptance test binary: the
// invariants of every module, and the acceptance criteria A1-A10.

#include <functional>
#include <string>
#include <vector>

namespace dce {

struct CheckResult {
  bool passed;
  std::string detail;
};

struct Check {
  std::string id;
  std::string title;
  std::function<CheckResult()> run;
};

// Library invariants; each runs in seconds.
std::vector<Check> invariant_checks();

// Acceptance criteria "A1".."A10". Some integrate the figure presets at
// automatically selected truncations and take minutes; `workers` bounds the
// number of concurrent integrations inside a check.
std::vector<Check> acceptance_checks(int workers = 1);

}  // namespace dce
