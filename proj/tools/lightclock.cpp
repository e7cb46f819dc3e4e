#include <iostream>
#include <string>
#include <vector>

#include "lightclock/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lightclock::cli::run(args, std::cout, std::cerr);
}
