// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace beamsched {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  std::string detail;
};

struct AcceptanceOptions {
  bool full_scale = false;  // also run the long full-scale gain check
  int only = 0;             // 0 = all, otherwise a single criterion id
};

// Runs the numbered verification criteria (closed-form agreement, limit
// behavior, optimality checks, trend and validation experiments). Each
// result carries a pass/fail verdict, elapsed time, and measured values.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts = {});

// Prints one line per criterion and returns the number of failures.
int report_acceptance(const std::vector<CriterionResult>& results, std::ostream& os);

}  // namespace beamsched
