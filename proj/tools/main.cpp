#include <iostream>
#include <string>
#include <vector>

#include "ptl/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return ptl::run_cli(args, std::cout, std::cerr);
}
