#include <iostream>

#include "gencert/cli.hpp"

int main(int argc, char** argv) { return gencert::cli::run(argc, argv, std::cout, std::cerr); }
