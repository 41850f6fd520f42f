#include "projflat_cli/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return projflat::cli::run({argv, argv + argc}, std::cout, std::cerr);
}
