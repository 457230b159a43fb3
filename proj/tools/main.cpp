#include <iostream>

#include "stochlp/cli.hpp"

int main(int argc, char** argv) { return stochlp::cli::run(argc, argv, std::cout, std::cerr); }
