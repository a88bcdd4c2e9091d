#include <iostream>

#include "ennbo/cli.hpp"

int main(int argc, char** argv) { return ennbo::cli::main_cli(argc, argv, std::cerr); }
