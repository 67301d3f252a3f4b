#include "hh/cli.hpp"

#include <iostream>
#include <string>
#include <vector>

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return hh::cli::dispatch(args, std::cout, std::cerr);
}
