#include <iostream>
#include <string>
#include <vector>

#include "germlab/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return germlab::cli::run_command(args, std::cout, std::cerr);
}
