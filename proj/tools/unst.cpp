#include <iostream>

#include "unst/cli.hpp"

int main(int argc, char** argv) { return unst::cli::run(argc, argv, std::cout, std::cerr); }
