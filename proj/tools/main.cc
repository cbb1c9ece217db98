#include <iostream>
#include <string>
#include <vector>

#include "refspect/cli.h"

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  return refspect::RunCli(args, std::cout, std::cerr);
}
