#include <iostream>

#include "esr/cli/cli.hpp"

int main(int argc, char** argv) { return esr::cli::run(argc, argv, std::cout, std::cerr); }
