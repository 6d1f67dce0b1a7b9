#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fockbench/common.hpp"

namespace fockbench {

/// Configuration error: exit code 1.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitCheckFailed = 2 };

const std::vector<std::string>& experiment_names();

/// Named tolerances and their defaults; `--tol name=value` overrides one.
const std::map<std::string, double>& default_tolerances();

struct ExperimentConfig {
  std::string experiment;
  std::string symbol = "zbar";
  std::string f, g;  // quantize; f defaults to symbol, g to f
  double alpha = 1.0;
  /// N and extent take experiment-specific defaults when unset.
  std::optional<int> N;
  std::optional<double> extent;
  double q = 2.0;
  double p = 2.0;
  double s = 2.0;
  double r = 1.0;
  std::vector<double> t;
  double tmin = 0.1;
  std::size_t samples = 10000;
  std::uint64_t seed = 1;
  std::vector<double> rings;
  int angles = 8;
  std::string output = "fockbench_out";
  std::string filter;
  std::string fault;
  std::map<std::string, double> tolerances = default_tolerances();

  int N_or(int fallback) const { return N.value_or(fallback); }
  double extent_or(double fallback) const { return extent.value_or(fallback); }
  double tol(const std::string& name) const;

  /// Range checks and symbol parsing; throws ConfigError naming the offending key.
  void validate() const;
  /// key=value pairs in a fixed order, for the manifest.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// `fockbench <experiment> [--key value]... [--config file]`. The config file holds flat
/// key=value lines; command-line values win. Throws ConfigError; `--help` sets help_text.
ExperimentConfig parse_command_line(int argc, const char* const* argv, std::string* help_text = nullptr);

}  // namespace fockbench
