#include <iostream>

#include "dginj/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    return dginj::run_cli(args, std::cout, std::cerr);
}
