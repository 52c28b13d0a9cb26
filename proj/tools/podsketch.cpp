#include <iostream>
#include <string>
#include <vector>

#include "podsketch/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return podsketch::run_cli(args, std::cout, std::cerr);
}
