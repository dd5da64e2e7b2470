#include <iostream>

#include "bdr/cli.hpp"

int main(int argc, char** argv) { return bdr::run_cli(argc, argv, std::cout, std::cerr); }
