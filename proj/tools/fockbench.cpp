#include <iostream>

#include "fockbench/config.hpp"
#include "fockbench/experiments.hpp"

int main(int argc, char** argv) {
  using namespace fockbench;
  try {
    std::string help;
    const ExperimentConfig cfg = parse_command_line(argc, argv, &help);
    if (!help.empty()) {
      std::cout << help;
      return kExitOk;
    }
    return run(cfg, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "fockbench: " << e.what() << '\n';
    return kExitConfig;
  }
}
