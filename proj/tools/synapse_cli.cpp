#include <iostream>

#include "synapse/cli.hpp"

int main(int argc, char** argv) {
  return synapse::run_command({argv + 1, argv + argc}, std::cout, std::cerr);
}
