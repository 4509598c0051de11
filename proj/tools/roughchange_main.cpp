#include <iostream>
#include <string>
#include <vector>

#include "roughchange/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return roughchange::cli::run_cli(args, std::cout, std::cerr);
}
