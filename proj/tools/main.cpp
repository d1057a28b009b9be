#include <iostream>
#include <string>
#include <vector>

#include "mvp/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return mvp::cli::run(args, std::cout, std::cerr);
}
