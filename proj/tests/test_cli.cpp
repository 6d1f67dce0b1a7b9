#include "doctest.h"

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "fockbench/config.hpp"
#include "fockbench/experiments.hpp"

using namespace fockbench;
namespace fs = std::filesystem;

namespace {

ExperimentConfig parse(std::vector<const char*> args, std::string* help = nullptr) {
  args.insert(args.begin(), "fockbench");
  return parse_command_line(static_cast<int>(args.size()), args.data(), help);
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("fockbench_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::string> manifest(const fs::path& dir) {
  std::map<std::string, std::string> out;
  std::istringstream in(slurp(dir / "run.manifest"));
  for (std::string line; std::getline(in, line);) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) out[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return out;
}

}  // namespace

TEST_CASE("command-line parsing") {
  const auto c = parse({"g-field", "--symbol", "sinre", "--q", "1.5", "--extent", "3", "--t", "1,0.5,0.1"});
  CHECK(c.experiment == "g-field");
  CHECK(c.symbol == "sinre");
  CHECK(c.q == 1.5);
  CHECK(c.extent_or(8.0) == 3.0);
  CHECK(c.N_or(60) == 60);
  CHECK(c.t == std::vector<double>{1.0, 0.5, 0.1});
  CHECK_NOTHROW(c.validate());

  CHECK_THROWS_AS(parse({"kernel-check", "--no-such-key", "3"}), ConfigError);
  CHECK_THROWS_AS(parse({"no-such-experiment"}), ConfigError);
  CHECK_THROWS_AS(parse({"kernel-check", "--alpha", "abc"}), ConfigError);

  std::string help;
  const auto h = parse({"--help"}, &help);
  CHECK(h.experiment.empty());
  CHECK(help.find("kernel-check") != std::string::npos);
}

TEST_CASE("tolerance overrides") {
  const auto c = parse({"kernel-check", "--tol", "kernel=1e-6", "--tol", "route=1e-4"});
  CHECK(c.tol("kernel") == 1e-6);
  CHECK(c.tol("route") == 1e-4);
  CHECK(c.tol("hermitian") == default_tolerances().at("hermitian"));
  CHECK_THROWS_AS(parse({"kernel-check", "--tol", "nonsense=1"}), ConfigError);
  CHECK_THROWS_AS(parse({"kernel-check", "--tol", "kernel"}), ConfigError);
  CHECK_THROWS_AS(parse({"kernel-check", "--tol", "kernel=-1"}), ConfigError);
}

TEST_CASE("config files with command-line precedence") {
  const fs::path dir = scratch("cfgfile");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "run.ini");
    f << "alpha=2\nsamples=50\nsymbol=phase\ntol=kernel=1e-9\n";
  }
  const std::string path = (dir / "run.ini").string();
  const auto c = parse({"kernel-check", "--config", path.c_str(), "--samples", "70"});
  CHECK(c.alpha == 2.0);
  CHECK(c.samples == 70);
  CHECK(c.symbol == "phase");
  CHECK(c.tol("kernel") == 1e-9);
  {
    std::ofstream f(dir / "bad.ini");
    f << "alpha=2\nbogus=1\n";
  }
  const std::string bad = (dir / "bad.ini").string();
  CHECK_THROWS_AS(parse({"kernel-check", "--config", bad.c_str()}), ConfigError);
}

TEST_CASE("range validation names the key") {
  auto expect = [](std::vector<const char*> args, const std::string& key) {
    CAPTURE(key);
    try {
      parse(args).validate();
      FAIL("accepted");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find(key) != std::string::npos);
    }
  };
  expect({"kernel-check", "--alpha", "0"}, "alpha");
  expect({"hankel", "--N", "0"}, "N");
  expect({"g-field", "--q", "20"}, "q");
  expect({"quantize", "--t", "1,0.001"}, "t");
  expect({"quantize", "--t", "0.5,1"}, "t");
  expect({"hankel", "--rings", "2,1"}, "rings");
  expect({"g-field", "--symbol", "foo(z)"}, "symbol");
  expect({"suite", "--fault", "everything"}, "fault");
}

TEST_CASE("kernel-check run and manifest") {
  const fs::path out = scratch("kernel");
  const std::string o = out.string();
  auto cfg = parse({"kernel-check", "--samples", "200", "--output", o.c_str()});
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitOk);
  const auto m = manifest(out);
  CHECK(m.at("exit_code") == "0");
  CHECK(m.at("config.experiment") == "kernel-check");
  CHECK(m.at("artifact.kernel_check.csv.rows") == "200");
  CHECK(m.at("check.kernel_modulus_identity").rfind("pass", 0) == 0);
  CHECK(m.count("fockbench.version"));
  CHECK(m.count("eigen.version"));
  CHECK(m.count("fftw.version"));
  CHECK(m.count("wall_time_s"));
  CHECK(log.str().find("kernel_modulus_identity: pass") != std::string::npos);

  // Same config, same bytes.
  const std::string first = slurp(out / "kernel_check.csv");
  CHECK(run(cfg, log) == kExitOk);
  CHECK(slurp(out / "kernel_check.csv") == first);
  cfg.seed = 2;
  CHECK(run(cfg, log) == kExitOk);
  CHECK(slurp(out / "kernel_check.csv") != first);

  // A tolerance nobody can meet turns into exit code 2.
  cfg.tolerances["kernel"] = 0.0;
  CHECK(run(cfg, log) == kExitCheckFailed);
  CHECK(manifest(out).at("exit_code") == "2");
}

TEST_CASE("configuration errors inside run exit with 1") {
  const fs::path out = scratch("badrun");
  const std::string o = out.string();
  auto cfg = parse({"berger-coburn", "--symbol", "zbar", "--output", o.c_str()});
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitConfig);
  CHECK(manifest(out).count("error"));
}

TEST_CASE("g-field of zbar is constant") {
  const fs::path out = scratch("gfield");
  const std::string o = out.string();
  const auto cfg = parse({"g-field", "--symbol", "zbar", "--extent", "2", "--output", o.c_str()});
  std::ostringstream log;
  CHECK(run(cfg, log) == kExitOk);
  std::istringstream csv(slurp(out / "gfield.csv"));
  std::string line;
  std::getline(csv, line);
  int rows = 0;
  while (std::getline(csv, line)) {
    const double v = std::stod(line.substr(line.rfind(',') + 1));
    CHECK(std::abs(v - 1.0 / std::sqrt(2.0)) < 1e-4);
    ++rows;
  }
  CHECK(rows == 49);  // spacing-1/2 grid points in the closed disk of radius 2
}

TEST_CASE("suite filter and fault injection") {
  const fs::path out = scratch("suite");
  const std::string o = out.string();
  std::ostringstream log;
  auto ok = parse({"suite", "--filter", "kernel-identity", "--output", o.c_str()});
  CHECK(run(ok, log) == kExitOk);
  CHECK(manifest(out).at("artifact.suite.csv.rows") == "1");

  auto faulty = parse({"suite", "--filter", "fockcore", "--fault", "basis-constants", "--output", o.c_str()});
  CHECK(run(faulty, log) == kExitCheckFailed);
  const auto m = manifest(out);
  CHECK(m.at("check.criterion_1_kernel-identity").rfind("pass", 0) == 0);
  CHECK(m.at("check.criterion_2_basis-orthonormality").rfind("fail", 0) == 0);

  auto none = parse({"suite", "--filter", "nothing", "--output", o.c_str()});
  CHECK(run(none, log) == kExitConfig);
}
