#include "cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return eoconv::cli_main(argc, argv, std::cout, std::cerr); }
