// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner: one pass/fail line per criterion, nonzero exit on any
// failure. --full-scale adds the long full-scale gain check; --criterion N
// narrows the run.

#include <cstdlib>
#include <cstring>
#include <iostream>

#include "beamsched/acceptance.hpp"

int main(int argc, char** argv) {
  beamsched::AcceptanceOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--full-scale") == 0) {
      opts.full_scale = true;
    } else if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      opts.only = std::atoi(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--full-scale] [--criterion N]\n";
      return 2;
    }
  }

  const auto results = beamsched::run_acceptance(opts);
  const int failures = beamsched::report_acceptance(results, std::cout);
  std::cout << (results.size() - failures) << "/" << results.size() << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
