#include <iostream>
#include <string>
#include <vector>

#include "starshell/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return starshell::run_cli(args, std::cout, std::cerr);
}
