#include "weylint/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return weylint::cli::run(argc, argv, std::cout, std::cerr);
}
