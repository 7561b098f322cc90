#include <iostream>

#include "causat_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return causat::cli::runCli(args, std::cout, std::cerr);
}
