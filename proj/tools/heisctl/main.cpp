#include <iostream>
#include <string>
#include <vector>

#include "heisctl/commands.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return heisctl::run_cli(args, std::cout, std::cerr);
}
