#include <iostream>

#include "pricing/cli.hpp"

int main(int argc, char** argv)
{
    return pricing::cli::run(argc, argv, std::cout, std::cerr);
}
