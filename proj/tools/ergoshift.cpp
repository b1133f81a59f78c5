#include <iostream>

#include "ergoshift/cli.hpp"

int main(int argc, char** argv) { return ergoshift::run_cli(argc, argv, std::cout, std::cerr); }
