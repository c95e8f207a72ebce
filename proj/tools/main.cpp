#include <iostream>

#include "terraroute_tools/cli.hpp"

int main(int argc, char** argv) {
  return terraroute::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
