#include <iostream>

#include "intruder/cli.hpp"

int main(int argc, char** argv) { return intruder::cli::run(argc, argv, std::cout, std::cerr); }
