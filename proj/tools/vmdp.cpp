#include <iostream>
#include <string>
#include <vector>

#include "vmdp/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return vmdp::cli::run(std::move(args), std::cout, std::cerr);
}
