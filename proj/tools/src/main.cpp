#include <iostream>

#include "qfreg_cli/cli.hpp"

int main(int argc, char** argv) { return qfreg::cli::run_cli(argc, argv, std::cout, std::cerr); }
