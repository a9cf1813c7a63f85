#include <iostream>

#include "wgvqe/cli.hpp"

int main(int argc, char** argv) { return wgvqe::run_cli(argc, argv, std::cout, std::cerr); }
