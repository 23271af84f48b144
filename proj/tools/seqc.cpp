#include <iostream>
#include <string>
#include <vector>

#include "seqc/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return seqc::cli::run(args, std::cout, std::cerr);
}
