#include "kashaev/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return kashaev::cli::dispatch(argc, argv, std::cout, std::cerr); }
