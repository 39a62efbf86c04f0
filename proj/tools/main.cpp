#include <iostream>

#include "tskan_cli/app.hpp"

int main(int argc, char** argv) { return tskan::cli::run(argc, argv, std::cout, std::cerr); }
