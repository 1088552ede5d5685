#include <iostream>

#include "gcruin/cli.hpp"

int main(int argc, char** argv) { return gcruin::run_cli(argc, argv, std::cout, std::cerr); }
