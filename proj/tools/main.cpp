#include <iostream>

#include "ncball/cli.hpp"

int main(int argc, char** argv) {
  return ncball::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
