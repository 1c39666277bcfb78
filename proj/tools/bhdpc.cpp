#include <iostream>

#include "bhdpc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return bhdpc::run_cli(args, std::cout, std::cerr);
}
