#include <iostream>

#include "citecast/commands.hpp"

int main(int argc, char** argv) { return citecast::run_cli(argc, argv, std::cout, std::cerr); }
