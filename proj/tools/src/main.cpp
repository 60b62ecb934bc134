#include "biocnlf/cli/app.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return biocnlf::cli::run_cli(argc, argv, std::cout, std::cerr);
}
