#include <iostream>
#include <string>
#include <vector>

#include "gostrata_cli/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return gos::cli::run(args, std::cout, std::cerr);
}
