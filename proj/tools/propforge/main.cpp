#include <iostream>

#include "propforge/commands.hpp"

int main(int argc, char** argv) { return propforge::cli::run_cli(argc, argv, std::cout, std::cerr); }
