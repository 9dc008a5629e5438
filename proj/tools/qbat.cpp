#include <iostream>

#include "qbat/cli.hpp"

int main(int argc, char** argv) { return qbat::cli::main(argc, argv, std::cout, std::cerr); }
