#include <iostream>

#include "bernapprox/cli.hpp"

int main(int argc, char** argv) { return bernapprox::cli::run(argc, argv, std::cout, std::cerr); }
