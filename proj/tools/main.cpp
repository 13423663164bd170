#include <iostream>

#include "zetaflow/cli.hpp"

int main(int argc, char** argv) { return zetaflow::cli::main(argc, argv, std::cout, std::cerr); }
