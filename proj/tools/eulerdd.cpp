#include <iostream>
#include <string>
#include <vector>

#include "eulerdd/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return eulerdd::run_cli(args, std::cout, std::cerr);
}
