#include <iostream>

#include "imp/cli.hpp"

int main(int argc, char **argv) {
  std::vector<std::string> args(argv, argv + argc);
  return imp::cli::run_cli(args, std::cout, std::cerr);
}
