#include <iostream>

#include "diskpart/commands.hpp"

int main(int argc, char** argv) { return diskpart::run_cli(argc, argv, std::cout, std::cerr); }
