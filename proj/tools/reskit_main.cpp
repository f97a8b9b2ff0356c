#include <iostream>

#include "reskit/cli.hpp"

int main(int argc, char** argv) { return reskit::cli::run(argc, argv, std::cout, std::cerr); }
