#include "adiapower/cli.hpp"

#include <iostream>
#include <vector>

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return adiapower::cli::run(args, std::cout, std::cerr);
}
