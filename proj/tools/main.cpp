#include <iostream>
#include <string>
#include <vector>

#include "edgeworth/cli/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return edgeworth::cli::run(args, std::cout, std::cerr);
}
