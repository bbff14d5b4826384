#include <iostream>

#include "cli.h"

int main(int argc, char** argv) {
  return c2a2::RunCli(argc, argv, std::cout, std::cerr);
}
