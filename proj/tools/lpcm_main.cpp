#include <iostream>

#include "lpcm/cli.hpp"

int main(int argc, char** argv) { return lpcm::cli_main(argc, argv, std::cout, std::cerr); }
