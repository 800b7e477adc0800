#include <iostream>
#include <string>
#include <vector>

#include "diffavg/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return diffavg::cli::run(args, std::cout, std::cerr);
}
