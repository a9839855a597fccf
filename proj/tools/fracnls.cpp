#include <iostream>

#include "fracnls/cli.hpp"

int main(int argc, char** argv) { return fracnls::run_cli(argc, argv, std::cout, std::cerr); }
