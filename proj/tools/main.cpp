#include <iostream>

#include "wormcov/cli.hpp"

int main(int argc, char** argv) {
    return wormcov::cli_main(argc, argv, std::cout, std::cerr);
}
