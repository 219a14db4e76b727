#include <iostream>

#include "qlvar_cli/run.hpp"

int main(int argc, char** argv) { return qlvar::cli::run_cli(argc, argv, std::cout, std::cerr); }
