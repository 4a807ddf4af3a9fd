#include <iostream>

#include "eqcnn/cli/commands.hpp"

int main(int argc, char** argv) {
  return eqcnn::cli::run_cli(argc, argv, std::cout, std::cerr);
}
