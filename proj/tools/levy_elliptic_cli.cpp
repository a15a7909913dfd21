#include <iostream>
#include <string>
#include <vector>

#include "levy_elliptic/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return levy_elliptic::run_cli(args, std::cout, std::cerr);
}
