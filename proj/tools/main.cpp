#include <iostream>
#include <string>
#include <vector>

#include "amrt/cli/commands.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return amrt::cli::run(args, std::cout, std::cerr);
}
