#include <iostream>

#include "hawkes_risk/cli.hpp"

int main(int argc, char **argv) { return hawkes_risk::cli::run(argc, argv, std::cout, std::cerr); }
