#include <iostream>

#include "powerfit/cli.hpp"

int main(int argc, char **argv) {
  return powerfit::cli::main_entry(argc, argv, std::cin, std::cout, std::cerr);
}
