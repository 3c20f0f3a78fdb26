#include <iostream>

#include "tpzmc/cli.hpp"

int main(int argc, char** argv) { return tpzmc::run_cli(argc, argv, std::cout, std::cerr); }
