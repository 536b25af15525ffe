#include <iostream>
#include <string>
#include <vector>

#include "iterseries/cli.hpp"

int main(int argc, char** argv) {
  return iterseries::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
