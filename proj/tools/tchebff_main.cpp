#include <iostream>
#include <string>
#include <vector>

#include "tchebff/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return tchebff::cli::run(std::move(args), std::cout, std::cerr);
}
