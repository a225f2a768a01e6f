#include <iostream>
#include <string>
#include <vector>

#include "treecolor/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return treecolor::execute(args, std::cout, std::cerr);
}
