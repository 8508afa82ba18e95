#include <iostream>
#include <string>
#include <vector>

#include "cli_run.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return coiso::run_cli(args, std::cout, std::cerr);
}
