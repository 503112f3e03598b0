#include <iostream>

#include "tradelab/cli.hpp"

int main(int argc, char** argv) { return tradelab::cli::run(argc, argv, std::cout, std::cerr); }
