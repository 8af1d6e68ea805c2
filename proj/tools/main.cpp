#include <iostream>

#include "lgr/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return lgr::cli::run(args, std::cin, std::cout, std::cerr);
}
