#include "kennedy/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return kennedy::cli::run(argc, argv, std::cout, std::cerr);
}
