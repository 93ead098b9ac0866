#include <iostream>
#include <string>
#include <vector>

#include "cvfid/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cvfid::cli::run(args, std::cout, std::cerr);
}
