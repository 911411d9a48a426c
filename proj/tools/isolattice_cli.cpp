#include <iostream>

#include "isolattice/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return isolattice::cli_dispatch(args, std::cout, std::cerr);
}
