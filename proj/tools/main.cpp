#include <iostream>

#include "bncut/cli.hpp"

int main(int argc, char** argv) {
  return bncut::cli_main(argc, argv, std::cout, std::cerr);
}
