#include <iostream>

#include "dmnls/cli.hpp"

int main(int argc, char** argv) { return dmnls::run_cli(argc, argv, std::cout, std::cerr); }
