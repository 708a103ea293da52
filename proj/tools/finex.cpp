#include <iostream>

#include "finex/cli.hpp"

int main(int argc, char** argv) { return finex::run_cli(argc, argv, std::cout, std::cerr); }
