#include <iostream>
#include <string>
#include <vector>

#include "hkb/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  const auto outcome = hkb::cli::run(args);
  std::cout << outcome.out << std::flush;
  std::cerr << outcome.err;
  return outcome.code;
}
