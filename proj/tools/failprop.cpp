#include <iostream>
#include <string>
#include <vector>

#include "failprop/cli.hpp"

int main(int argc, char** argv) {
  return failprop::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
