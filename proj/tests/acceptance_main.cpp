// Acceptance battery: one PASS/FAIL line per criterion. Optional argv[1] is a filter.
#include <iostream>

#include "fockbench/acceptance.hpp"

int main(int argc, char** argv) {
  fockbench::AcceptanceOptions opts;
  if (argc > 1) opts.filter = argv[1];
  const auto results = fockbench::run_acceptance(opts, &std::cout);
  int failed = 0;
  for (const auto& r : results) failed += r.passed() ? 0 : 1;
  std::cout << results.size() - failed << "/" << results.size() << " criteria passed\n";
  return results.empty() || failed ? 1 : 0;
}
