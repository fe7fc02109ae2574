#include <iostream>

#include "bosonlab/cli.hpp"

int main(int argc, char** argv) { return bosonlab::cli::main_entry(argc, argv, std::cout, std::cerr); }
