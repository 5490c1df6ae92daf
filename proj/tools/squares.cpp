#include <iostream>

#include "squarepeg/cli.hpp"

int main(int argc, char** argv) { return squarepeg::run_cli(argc, argv, std::cout, std::cerr); }
