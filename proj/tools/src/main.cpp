#include <iostream>

#include "fpp/cli.hpp"

int main(int argc, char** argv) { return fpp::run_cli(argc, argv, std::cout, std::cerr); }
