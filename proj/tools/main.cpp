#include <iostream>

#include "biquat/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return biquat::run_cli(args, std::cout, std::cerr);
}
