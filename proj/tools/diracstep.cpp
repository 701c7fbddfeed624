#include "diracstep/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
  return diracstep::cli::main_entry(argc, argv, std::cout, std::cerr);
}
