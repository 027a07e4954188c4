#include <iostream>

#include "mobmem/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return mobmem::cli::run_cli(args, std::cout, std::cerr);
}
