#include <iostream>

#include "graphlogm/cli.hpp"

int main(int argc, char** argv) { return graphlogm::run_cli(argc, argv, std::cout, std::cerr); }
