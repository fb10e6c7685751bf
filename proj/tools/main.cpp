#include <iostream>
#include <string>
#include <vector>

#include "sympolar/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return sympolar::cli::dispatch(args, std::cout, std::cerr);
}
