#include <iostream>
#include <string>
#include <vector>

#include "semkg/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return semkg::cli::run(args, std::cout, std::cerr);
}
