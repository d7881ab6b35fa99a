#include <iostream>

#include "plawlab/cli.hpp"

int main(int argc, char** argv) { return plawlab::main_entry(argc, argv, std::cout, std::cerr); }
