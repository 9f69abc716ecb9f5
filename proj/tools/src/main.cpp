#include <iostream>

#include "ris_cli/commands.hpp"

int main(int argc, char** argv) {
    return ris::cli::run_cli(argc, argv, std::cout, std::cerr);
}
