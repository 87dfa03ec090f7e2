#include <iostream>

#include "swnet/cli.h"

int main(int argc, char** argv) { return swnet::run_cli(argc, argv, std::cout, std::cerr); }
