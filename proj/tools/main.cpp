#include <iostream>

#include "sheafcoh/cli.hpp"

int main(int argc, char** argv) { return sheafcoh::cli::run(argc, argv, std::cout, std::cerr); }
