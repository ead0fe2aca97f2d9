#include <iostream>
#include <string>
#include <vector>

#include "chase_escape/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return chase::cli::dispatch(args, std::cout, std::cerr);
}
