#include <iostream>

#include "pandasim/cli.hpp"

int main(int argc, char** argv) { return pandasim::run_cli(argc, argv, std::cout, std::cerr); }
