#pragma once

#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "fockbench/config.hpp"

namespace fockbench {

/// Ordered key=value lines written to <output>/run.manifest.
class Manifest {
 public:
  void set(const std::string& key, const std::string& value);
  void set(const std::string& key, double value);
  /// Records a pass/fail check; the runner exits 2 if any check failed.
  void check(const std::string& name, bool pass, double value, const std::string& op, double bound);
  bool all_passed() const { return failures_ == 0; }
  const std::vector<std::pair<std::string, std::string>>& lines() const { return lines_; }
  void write(std::ostream& os) const;

 private:
  std::vector<std::pair<std::string, std::string>> lines_;
  int failures_ = 0;
};

/// Runs cfg.experiment, writing CSV artifacts and run.manifest under cfg.output. Check lines go
/// to `log`. Returns 0 when every check passed, 2 on a failed check, 1 on a configuration error.
int run(const ExperimentConfig& cfg, std::ostream& log);

}  // namespace fockbench
