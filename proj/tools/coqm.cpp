#include <iostream>

#include "coqm/cli.hpp"

int main(int argc, char** argv) { return coqm::run_cli(argc, argv, std::cout, std::cerr); }
