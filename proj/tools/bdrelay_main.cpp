#include <iostream>

#include "bdrelay/cli.hpp"

int main(int argc, char** argv)
{
    return bdrelay::run_cli(argc, argv, std::cout, std::cerr);
}
