#include "derivreg/cli.hpp"

#include <iostream>

int
main(int argc, char** argv)
{
  return derivreg::cli::main(argc, argv, std::cout, std::cerr);
}
