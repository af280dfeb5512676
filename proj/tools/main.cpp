#include <iostream>

#include "monodrift/cli.hpp"

int main(int argc, char** argv) { return monodrift::run_cli(argc, argv, std::cout, std::cerr); }
