#include <iostream>

#include "lh3cli/cli.hpp"

int main(int argc, char** argv) {
  return lh3::cli::run(argc, argv, std::cout, std::cerr);
}
