#include <iostream>
#include <string>
#include <vector>

#include "qla/cli.hpp"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return qla::cli::main(args, std::cout, std::cerr);
}
