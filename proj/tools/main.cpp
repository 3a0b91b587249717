#include <iostream>

#include "mbdp/cli.hpp"

int main(int argc, char** argv) { return mbdp::main_entry(argc, argv, std::cout, std::cerr); }
