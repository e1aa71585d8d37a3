#include <iostream>
#include <string>
#include <vector>

#include "colocq/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return colocq::cli::run(args, std::cout, std::cerr);
}
