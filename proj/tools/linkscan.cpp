#include <iostream>
#include <string>
#include <vector>

#include "linkscan/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return linkscan::cli::run(args, std::cout, std::cerr);
}
