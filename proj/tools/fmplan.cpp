#include <iostream>

#include "fmplan/cli_app.hpp"

int main(int argc, char** argv) { return fmplan::run_cli(argc, argv, std::cout, std::cerr); }
