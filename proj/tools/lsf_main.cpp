#include <iostream>

#include "lsf/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lsf::run_command(args, std::cout, std::cerr);
}
