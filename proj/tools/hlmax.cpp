#include "hlmax/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return hlmax::cli::run(argc, argv, std::cout, std::cerr); }
