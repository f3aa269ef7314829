#include <iostream>

#include "zfk/commands.hpp"

int main(int argc, char** argv) { return zfk::cli::run(argc, argv, std::cout, std::cerr); }
