#include "fockbench/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>

#include "fockbench/csv.hpp"
#include "fockbench/expr.hpp"

namespace fockbench {

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"kernel-check", "g-field",    "decompose", "hankel", "berger-coburn",
                                              "dbar-check",   "beurling", "quantize",  "suite"};
  return names;
}

const std::map<std::string, double>& default_tolerances() {
  static const std::map<std::string, double> tol{
      {"kernel", 1e-12},        {"reconstruction", 1e-10},       {"route", 1e-8},
      {"hermitian", 1e-8},      {"decomposition_constant", 1.0}, {"bc_ratio", 10.0},
      {"dbar_residual", 1e-2},  {"dbar_hankel", 0.05},           {"beurling", 1e-3},
      {"factorization", 1e-6},
  };
  return tol;
}

double ExperimentConfig::tol(const std::string& name) const {
  const auto it = tolerances.find(name);
  if (it == tolerances.end()) throw ConfigError("unknown tolerance '" + name + "'");
  return it->second;
}

namespace {

void require(bool ok, const std::string& key, const std::string& what) {
  if (!ok) throw ConfigError("config key '" + key + "': " + what);
}

std::string join(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_double(v[i]);
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  const auto& names = experiment_names();
  require(std::find(names.begin(), names.end(), experiment) != names.end(), "experiment",
          "unknown experiment '" + experiment + "'");
  for (const auto& [key, spec] : {std::pair{"symbol", symbol}, std::pair{"f", f}, std::pair{"g", g}}) {
    if (spec.empty()) continue;
    try {
      (void)symbol_from_spec(spec);
    } catch (const InvalidInput& e) {
      throw ConfigError(std::string("config key '") + key + "': " + e.what());
    }
  }
  require(alpha > 0.0 && alpha <= 16.0, "alpha", "must lie in (0, 16]");
  if (N) require(*N >= 1 && *N <= 400, "N", "must lie in [1, 400]");
  if (extent) require(*extent > 0.0 && *extent <= 32.0, "extent", "must lie in (0, 32]");
  require(q > 0.0 && q <= 16.0, "q", "must lie in (0, 16]");
  require(p > 0.0 && p <= 16.0, "p", "must lie in (0, 16]");
  require(s > 0.0, "s", "must be > 0 (inf allowed)");
  require(r > 0.0 && r <= 8.0, "r", "must lie in (0, 8]");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require(t[i] >= 0.01 && t[i] <= 1.0, "t", "values must lie in [0.01, 1]");
    require(i == 0 || t[i] < t[i - 1], "t", "must be strictly decreasing");
  }
  require(tmin >= 0.01 && tmin <= 1.0, "tmin", "must lie in [0.01, 1]");
  require(samples >= 1 && samples <= 10000000, "samples", "must lie in [1, 1e7]");
  for (std::size_t i = 0; i < rings.size(); ++i) {
    require(rings[i] > 0.0 && rings[i] <= 64.0, "rings", "values must lie in (0, 64]");
    require(i == 0 || rings[i] > rings[i - 1], "rings", "must be strictly increasing");
  }
  require(angles >= 1 && angles <= 256, "angles", "must lie in [1, 256]");
  require(!output.empty(), "output", "must be non-empty");
  require(fault.empty() || fault == "basis-constants", "fault", "only 'basis-constants' is supported");
  for (const auto& [name, v] : tolerances) require(std::isfinite(v) && v >= 0.0, "tol", name + " must be finite and >= 0");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> out{
      {"experiment", experiment},
      {"symbol", symbol},
      {"f", f},
      {"g", g},
      {"alpha", format_double(alpha)},
      {"N", N ? std::to_string(*N) : "default"},
      {"extent", extent ? format_double(*extent) : "default"},
      {"q", format_double(q)},
      {"p", format_double(p)},
      {"s", format_double(s)},
      {"r", format_double(r)},
      {"t", join(t)},
      {"tmin", format_double(tmin)},
      {"samples", std::to_string(samples)},
      {"seed", std::to_string(seed)},
      {"rings", join(rings)},
      {"angles", std::to_string(angles)},
      {"output", output},
      {"filter", filter},
      {"fault", fault},
  };
  for (const auto& [name, v] : tolerances) out.emplace_back("tol." + name, format_double(v));
  return out;
}

ExperimentConfig parse_command_line(int argc, const char* const* argv, std::string* help_text) {
  ExperimentConfig cfg;
  CLI::App app{"Fock-space Hankel and IDA experiment runner", "fockbench"};
  app.set_config("--config", "", "flat key=value file; command-line values win");
  app.allow_config_extras(CLI::config_extras_mode::error);

  double extent = 0.0;
  int N = 0;
  std::vector<std::string> tol;
  app.add_option("experiment", cfg.experiment, "one of kernel-check, g-field, decompose, hankel, berger-coburn, "
                                               "dbar-check, beurling, quantize, suite")
      ->required();
  app.add_option("--symbol", cfg.symbol, "built-in id or expression over z");
  app.add_option("--f", cfg.f, "first quantize symbol (default: symbol)");
  app.add_option("--g", cfg.g, "second quantize symbol (default: f)");
  app.add_option("--alpha", cfg.alpha, "weight parameter, phi = alpha |z|^2 / 2");
  auto* n_opt = app.add_option("--N", N, "basis truncation degree");
  auto* ext = app.add_option("--extent", extent, "radius of the sampled disk");
  app.add_option("--q", cfg.q, "local L^q exponent");
  app.add_option("--p", cfg.p, "outer exponent");
  app.add_option("--s", cfg.s, "seminorm or gradient exponent");
  app.add_option("--r", cfg.r, "local ball radius");
  app.add_option("--t", cfg.t, "decreasing scale schedule")->delimiter(',');
  app.add_option("--tmin", cfg.tmin, "smallest scale when --t is absent");
  app.add_option("--samples", cfg.samples, "random samples (kernel-check)");
  app.add_option("--seed", cfg.seed, "RNG seed");
  app.add_option("--rings", cfg.rings, "increasing ring radii")->delimiter(',');
  app.add_option("--angles", cfg.angles, "probes per ring");
  app.add_option("--output", cfg.output, "artifact directory");
  app.add_option("--filter", cfg.filter, "suite: criterion tag or number");
  app.add_option("--fault", cfg.fault, "suite: injected fault (basis-constants)");
  app.add_option("--tol", tol, "tolerance override name=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    if (help_text) *help_text = app.help();
    cfg.experiment.clear();
    return cfg;
  } catch (const CLI::ParseError& e) {
    throw ConfigError(e.what());
  }
  if (ext->count() > 0) cfg.extent = extent;
  if (n_opt->count() > 0) cfg.N = N;
  for (const auto& item : tol) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ConfigError("config key 'tol': expected name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    if (!cfg.tolerances.count(name)) throw ConfigError("config key 'tol': unknown tolerance '" + name + "'");
    try {
      std::size_t used = 0;
      cfg.tolerances[name] = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError("config key 'tol': bad value in '" + item + "'");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace fockbench
