#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace fockbench {

struct AcceptanceOptions {
  /// Empty, a module tag (fockcore, ida, operators, dbar, quantization) or a criterion number.
  std::string filter;
  /// "basis-constants" corrupts the normalization constants used by the orthonormality criterion.
  std::string fault;
  std::uint64_t seed = 1;
};

struct SubCheck {
  std::string name;
  double value = 0.0;
  /// Printed as "value <op> bound".
  std::string op;
  double bound = 0.0;
  bool pass = false;
};

struct Criterion {
  int id;
  std::string tag;
  std::string name;
  double budget_seconds;
};

struct CriterionResult {
  Criterion criterion;
  std::vector<SubCheck> checks;
  double seconds = 0.0;
  /// Non-empty when the criterion threw.
  std::string error;
  bool passed() const;
};

const std::vector<Criterion>& acceptance_criteria();
bool criterion_selected(const Criterion& c, const std::string& filter);

CriterionResult run_criterion(const Criterion& c, const AcceptanceOptions& opts);

/// Runs the selected criteria in order and prints one line each to `log` (if non-null).
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opts, std::ostream* log);

/// "PASS  3 g-oracle [ida] 4.1s | name=value<bound ..."
std::string format_result_line(const CriterionResult& r);

}  // namespace fockbench
