#include <iostream>
#include <vector>

#include "ainfss/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ainfss::cli_main(args, std::cout, std::cerr);
}
