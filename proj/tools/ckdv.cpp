#include <iostream>

#include "ckdv/cli.hpp"

int main(int argc, char** argv) {
  return ckdv::cli::run(argc, argv, std::cout, std::cerr);
}
