#include <iostream>
#include <string>
#include <vector>

#include "mlmc/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return mlmc::cli::run(args, std::cout, std::cerr);
}
