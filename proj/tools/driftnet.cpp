#include <iostream>

#include "driftnet/cli/cli.hpp"

int main(int argc, char** argv) { return driftnet::cli::run(argc, argv, std::cout, std::cerr); }
