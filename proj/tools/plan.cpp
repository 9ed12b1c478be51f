#include <iostream>
#include <string>
#include <vector>

#include "trsco/cli.hpp"

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  return trsco::plan_main(args, std::cout);
}
