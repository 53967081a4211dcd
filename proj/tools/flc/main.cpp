#include <iostream>

#include "flc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flc::run_cli(args, std::cout, std::cerr);
}
