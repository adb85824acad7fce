#include <iostream>

#include "csdnet/cli.hpp"

int main(int argc, char** argv) { return csdnet::cli::run(argc, argv, std::cout, std::cerr); }
