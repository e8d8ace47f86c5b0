#include <iostream>
#include <string>
#include <vector>

#include "netfrac/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return netfrac::run_cli(args, std::cout, std::cerr);
}
